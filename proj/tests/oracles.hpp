// SPDX-License-Identifier: Apache-2.0
//
// diffpos: diffraction-aided NLoS positioning simulator
// Copyright (C) 2026 The diffpos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Independent reference implementations used by the tests. Nothing here calls into the
// library; the point is to check it against a second derivation.

#ifndef DIFFPOS_TESTS_ORACLES_HPP
#define DIFFPOS_TESTS_ORACLES_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle
{
    using Vec3 = Eigen::Vector3d;

    // Frozen outputs of tests/oracles/reference_values.py (50-digit arithmetic).
    inline constexpr double concrete_30cm_3p5GHz_dB = 19.104504236541117;
    inline constexpr double concrete_sigma_3p5GHz = 0.089875368068398267;
    inline constexpr double plasterboard_13mm_28GHz_dB = 1.5188956740618502;
    inline constexpr double concrete_gamma_normal_3p5GHz = 0.39610932268405051;
    inline constexpr double fspl_100m_3p5GHz_dB = 83.329144108888887;
    inline constexpr double noise_floor_400MHz_290K_dBm = -87.954587280948481;
    inline constexpr double beta_sq_400MHz = 13333333333333333.0;
    inline constexpr double crlb_10dB_400MHz_s = 3.082022220307499e-10;
    inline constexpr double crlb_10dB_400MHz_m = 0.092396701703660265;

    // Golden-section minimum of a unimodal function on [lo, hi], iterated to interval collapse
    // and finished by scoring the two ends, so a minimum at the boundary is found too.
    inline double golden_min(const std::function<double(double)> &f, double lo, double hi, double *arg = nullptr)
    {
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = lo, b = hi;
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = f(c), fd = f(d);
        for (int i = 0; i < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i)
        {
            if (fc < fd)
            {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            }
            else
            {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        double best_x = 0.5 * (a + b), best = f(best_x);
        for (double x : {lo, hi})
            if (const double v = f(x); v < best)
            {
                best = v;
                best_x = x;
            }
        if (arg)
            *arg = best_x;
        return best;
    }

    // Two-leg length through the world-space point lambda p1 + (1 - lambda) p2.
    inline double edge_path(const Vec3 &tx, const Vec3 &rx, const Vec3 &p1, const Vec3 &p2, double lambda)
    {
        const Vec3 q = lambda * p1 + (1.0 - lambda) * p2;
        return (tx - q).norm() + (q - rx).norm();
    }

    inline double fermat_edge_length(const Vec3 &tx, const Vec3 &rx, const Vec3 &p1, const Vec3 &p2, double *lambda = nullptr)
    {
        return golden_min([&](double l) { return edge_path(tx, rx, p1, p2, l); }, 0.0, 1.0, lambda);
    }

    // Shortest tx -> s -> rx over points s of the plane n.x = d, by a coarse grid around the
    // foot of the segment and repeated local refinement.
    inline double fermat_plane_length(const Vec3 &tx, const Vec3 &rx, const Vec3 &n, double d)
    {
        Vec3 u = n.unitOrthogonal();
        Vec3 v = n.cross(u);
        const Vec3 origin = n * d;
        auto len = [&](double a, double b) {
            const Vec3 s = origin + a * u + b * v;
            return (tx - s).norm() + (s - rx).norm();
        };
        const double span = (tx - rx).norm() + std::abs(n.dot(tx) - d) + std::abs(n.dot(rx) - d) + 1.0;
        const Vec3 mid = 0.5 * (tx + rx) - origin;
        double ca = mid.dot(u), cb = mid.dot(v), step = span / 10.0;
        double best = len(ca, cb);
        while (step > 1e-11)
        {
            double ba = ca, bb = cb;
            for (int i = -10; i <= 10; ++i)
                for (int j = -10; j <= 10; ++j)
                {
                    const double a = ca + i * step, b = cb + j * step;
                    if (const double l = len(a, b); l < best)
                    {
                        best = l;
                        ba = a;
                        bb = b;
                    }
                }
            ca = ba;
            cb = bb;
            step /= 5.0;
        }
        return best;
    }

    inline double slab_loss_db(long double a, long double b, long double c, long double d, long double t, long double f)
    {
        const long double pi = 3.141592653589793238462643383279502884L;
        const long double eps0 = 8.8541878128e-12L, mu0 = 1.25663706212e-6L;
        const long double fg = f / 1e9L;
        const long double er = a * std::pow(fg, b);
        const long double sigma = c * std::pow(fg, d);
        const long double x = sigma / (2.0L * pi * f * eps0 * er);
        return static_cast<double>(12.27L * pi * f * t * std::sqrt(mu0 * eps0 * er) * std::sqrt(std::sqrt(1.0L + x * x) - 1.0L));
    }

    // |Gamma| of a lossy half-space, both polarisations, from Snell's law in complex form.
    inline double fresnel_magnitude(double er, double sigma, double f, double theta, bool te)
    {
        using C = std::complex<long double>;
        const long double pi = 3.141592653589793238462643383279502884L;
        const C eps(er, -sigma / (2.0L * pi * f * 8.8541878128e-12L));
        const long double ci = std::cos(static_cast<long double>(theta));
        const long double si = std::sin(static_cast<long double>(theta));
        const C root = std::sqrt(eps - si * si);
        const C g = te ? (ci - root) / (ci + root) : (eps * ci - root) / (eps * ci + root);
        return static_cast<double>(std::abs(g));
    }

    // Central differences of a scalar field.
    inline Vec3 gradient(const std::function<double(const Vec3 &)> &f, const Vec3 &x, double h)
    {
        Vec3 g;
        for (int k = 0; k < 3; ++k)
        {
            Vec3 a = x, b = x;
            a[k] += h;
            b[k] -= h;
            g[k] = (f(a) - f(b)) / (2.0 * h);
        }
        return g;
    }

    inline Vec3 random_point(std::mt19937_64 &rng, double lo, double hi)
    {
        std::uniform_real_distribution<double> u(lo, hi);
        return {u(rng), u(rng), u(rng)};
    }

    // Number of points (i + 0.5) s, i = 0, 1, ... strictly inside an interval of length L.
    inline std::size_t grid_count(double length, double spacing)
    {
        std::size_t n = 0;
        while ((static_cast<double>(n) + 0.5) * spacing < length)
            ++n;
        return n;
    }
}

#endif
