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

#include "diffpos/geometry.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace diffpos
{
    namespace
    {
        // Relative size of the leading coefficient below which the stationarity quadratic is
        // treated as linear and solved numerically instead.
        constexpr double degenerate_quadratic_tol = 1e-12;

        struct FrameSolution
        {
            double lambda;
            double length;
            bool endpoint;
            bool fallback;
        };

        // Newton refinement of the interior stationary point, in the edge coordinate q.
        double polish_lambda(const Point3 &a, const Point3 &n, double x1, double x2, double z_e, double lambda)
        {
            const double dx = x1 - x2;
            const double perp_a = a.y() * a.y() + (z_e - a.z()) * (z_e - a.z());
            const double perp_n = n.y() * n.y() + (z_e - n.z()) * (z_e - n.z());
            double best = two_leg_length(a, n, x1, x2, z_e, lambda);
            for (int it = 0; it < 3; ++it)
            {
                const double q = x2 + lambda * dx;
                const double l1 = std::sqrt((q - a.x()) * (q - a.x()) + perp_a);
                const double l2 = std::sqrt((q - n.x()) * (q - n.x()) + perp_n);
                if (l1 == 0.0 || l2 == 0.0)
                    break;
                const double g = (q - a.x()) / l1 + (q - n.x()) / l2;
                const double h = perp_a / (l1 * l1 * l1) + perp_n / (l2 * l2 * l2);
                if (!(h > 0.0))
                    break;
                const double cand = std::clamp((q - g / h - x2) / dx, 0.0, 1.0);
                const double len = two_leg_length(a, n, x1, x2, z_e, cand);
                if (!(len <= best))
                    break;
                best = len;
                lambda = cand;
            }
            return lambda;
        }

        FrameSolution solve_in_frame(const Point3 &a, const Point3 &n, double x1, double x2, double z_e)
        {
            const double xa = a.x(), ya = a.y(), za = a.z();
            const double xn = n.x(), yn = n.y(), zn = n.z();

            const double perp_a = (z_e - za) * (z_e - za) + ya * ya;
            const double perp_n = (z_e - zn) * (z_e - zn) + yn * yn;
            if (perp_a == 0.0 && perp_n == 0.0)
                throw std::invalid_argument("diffraction_point: transmitter and receiver both lie on the edge line");

            const double dx = x1 - x2;
            const double qa = dx * dx * ((yn * yn - ya * ya) + (zn * zn - za * za) + 2.0 * z_e * (za - zn));
            const double qb = 2.0 * dx * ((x2 - xa) * perp_n - (x2 - xn) * perp_a);
            const double qc = (x2 - xa) * (x2 - xa) * perp_n - (x2 - xn) * (x2 - xn) * perp_a;

            auto length = [&](double lambda) { return two_leg_length(a, n, x1, x2, z_e, lambda); };

            std::array<double, 2> roots{};
            std::size_t n_roots = 0;
            bool fallback = false;

            const double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
            double disc = qb * qb - 4.0 * qa * qc;
            if (disc < 0.0 && -disc <= 1e-12 * qb * qb)
                disc = 0.0;

            if (scale == 0.0 || std::abs(qa) < degenerate_quadratic_tol * scale || disc < 0.0)
            {
                fallback = true;
                const auto res = boost::math::tools::brent_find_minima(length, 0.0, 1.0, std::numeric_limits<double>::digits / 2);
                roots[n_roots++] = polish_lambda(a, n, x1, x2, z_e, res.first);
            }
            else
            {
                const double s = std::sqrt(disc);
                const double t = -0.5 * (qb + std::copysign(s, qb));
                const double r1 = t / qa;
                const double r2 = (t != 0.0) ? qc / t : r1;
                for (double r : {r1, r2})
                {
                    if (std::isfinite(r) && r >= -1e-12 && r <= 1.0 + 1e-12)
                        roots[n_roots++] = std::clamp(r, 0.0, 1.0);
                }
            }

            // Endpoints compete with the stationary points: p is convex in lambda, so when the
            // true stationary point lies off the segment the optimum is the nearer end even if
            // the spurious root of the squared condition falls inside [0, 1].
            FrameSolution best{1.0, length(1.0), true, fallback};
            if (const double l0 = length(0.0); l0 < best.length)
                best = {0.0, l0, true, fallback};

            for (std::size_t i = 0; i < n_roots; ++i)
            {
                double lambda = roots[i];
                if (!fallback)
                    lambda = polish_lambda(a, n, x1, x2, z_e, lambda);
                const double len = length(lambda);
                if (len <= best.length)
                    best = {lambda, len, lambda <= 0.0 || lambda >= 1.0, fallback};
            }
            return best;
        }

        DiffractionSolution finish(const WindowEdge &edge, double z_e, const FrameSolution &fs)
        {
            DiffractionSolution out;
            out.lambda = fs.lambda;
            out.path_length = fs.length;
            out.endpoint = fs.endpoint;
            out.fallback = fs.fallback;
            out.q = edge.to_world(Point3(edge.x2 + fs.lambda * (edge.x1 - edge.x2), 0.0, z_e));
            return out;
        }
    }

    WindowEdge WindowEdge::from_world(const Point3 &p1, const Point3 &p2, double window_height)
    {
        if (!p1.allFinite() || !p2.allFinite())
            throw std::invalid_argument("WindowEdge::from_world: non-finite endpoint");
        if (std::abs(p1.z() - p2.z()) > 1e-9 * std::max(1.0, std::abs(p1.z())))
            throw std::invalid_argument("WindowEdge::from_world: edge is not horizontal");

        Eigen::Vector3d u(p2.x() - p1.x(), p2.y() - p1.y(), 0.0);
        const double len = u.norm();
        if (len == 0.0)
            throw std::invalid_argument("WindowEdge::from_world: zero-length edge");
        u /= len;
        const Eigen::Vector3d v = Eigen::Vector3d::UnitZ().cross(u);

        Eigen::Matrix3d to_world_rot;
        to_world_rot.col(0) = u;
        to_world_rot.col(1) = v;
        to_world_rot.col(2) = Eigen::Vector3d::UnitZ();
        const Eigen::Vector3d origin(p1.x(), p1.y(), 0.0);

        WindowEdge e;
        e.x1 = 0.0;
        e.x2 = len;
        e.z_e = p1.z();
        e.w = window_height;
        e.frame.setIdentity();
        e.frame.linear() = to_world_rot.transpose();
        e.frame.translation() = -(to_world_rot.transpose() * origin);
        e.validate();
        return e;
    }

    WindowEdge WindowEdge::transformed(const Eigen::Isometry3d &motion) const
    {
        WindowEdge e = *this;
        e.frame = frame * motion.inverse();
        return e;
    }

    void WindowEdge::validate() const
    {
        if (!std::isfinite(x1) || !std::isfinite(x2) || !std::isfinite(z_e) || !std::isfinite(w))
            throw std::invalid_argument("WindowEdge: non-finite field");
        if (x1 == x2)
            throw std::invalid_argument("WindowEdge: x1 == x2");
        if (!(w > 0.0))
            throw std::invalid_argument("WindowEdge: window height must be positive");
        const Eigen::Matrix3d r = frame.linear();
        if (!r.allFinite() || !frame.translation().allFinite() ||
            (r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9 || r.determinant() < 0.0)
            throw std::invalid_argument("WindowEdge: frame is not a proper rigid transform");
    }

    ReflectorPlane ReflectorPlane::through(const Point3 &point, const Eigen::Vector3d &normal)
    {
        ReflectorPlane p;
        const double n = normal.norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::invalid_argument("ReflectorPlane::through: invalid normal");
        p.normal = normal / n;
        p.offset = p.normal.dot(point);
        return p;
    }

    void ReflectorPlane::validate() const
    {
        if (!normal.allFinite() || std::abs(normal.norm() - 1.0) > 1e-12 || !std::isfinite(offset))
            throw std::invalid_argument("ReflectorPlane: normal must be a finite unit vector");
        for (const auto &v : facet)
            if (std::abs(signed_distance(v)) > 1e-9 * std::max(1.0, v.norm()))
                throw std::invalid_argument("ReflectorPlane: facet vertex off the plane");
        if (!facet.empty() && facet.size() < 3)
            throw std::invalid_argument("ReflectorPlane: facet needs at least three vertices");
    }

    bool ReflectorPlane::facet_contains(const Point3 &p) const
    {
        if (facet.empty())
            return true;
        // In-plane basis, then even-odd crossing test.
        const Eigen::Vector3d helper = std::abs(normal.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
        const Eigen::Vector3d e1 = normal.cross(helper).normalized();
        const Eigen::Vector3d e2 = normal.cross(e1);
        const double px = e1.dot(p), py = e2.dot(p);
        bool inside = false;
        for (std::size_t i = 0, j = facet.size() - 1; i < facet.size(); j = i++)
        {
            const double xi = e1.dot(facet[i]), yi = e2.dot(facet[i]);
            const double xj = e1.dot(facet[j]), yj = e2.dot(facet[j]);
            if ((yi > py) != (yj > py) && px < (xj - xi) * (py - yi) / (yj - yi) + xi)
                inside = !inside;
        }
        return inside;
    }

    double euclidean_distance(const Point3 &a, const Point3 &b)
    {
        return (a - b).norm();
    }

    Point3 reflect_point(const Point3 &p, const ReflectorPlane &plane)
    {
        return p - 2.0 * plane.signed_distance(p) * plane.normal;
    }

    ReflectionPath reflection_path_length(const Point3 &tx, const Point3 &rx, const ReflectorPlane &plane)
    {
        plane.validate();
        const double d_tx = plane.signed_distance(tx);
        const double d_rx = plane.signed_distance(rx);
        if (!(d_tx * d_rx > 0.0))
            throw std::invalid_argument("reflection_path_length: tx and rx must lie strictly on the same side of the plane");

        const Point3 image = reflect_point(tx, plane);
        ReflectionPath out;
        out.length = (rx - image).norm();
        const double t = d_tx / (d_tx + d_rx);
        out.specular_point = image + t * (rx - image);
        out.valid = plane.facet_contains(out.specular_point);
        return out;
    }

    double two_leg_length(const Point3 &a, const Point3 &n, double x1, double x2, double z_e, double lambda)
    {
        const double q = lambda * x1 + (1.0 - lambda) * x2;
        return std::sqrt((a.x() - q) * (a.x() - q) + a.y() * a.y() + (a.z() - z_e) * (a.z() - z_e)) +
               std::sqrt((n.x() - q) * (n.x() - q) + n.y() * n.y() + (z_e - n.z()) * (z_e - n.z()));
    }

    DiffractionSolution diffraction_point(const Point3 &tx, const Point3 &rx, const WindowEdge &edge)
    {
        edge.validate();
        if (!tx.allFinite() || !rx.allFinite())
            throw std::invalid_argument("diffraction_point: non-finite input");
        const Point3 a = edge.to_local(tx);
        const Point3 n = edge.to_local(rx);
        return finish(edge, edge.z_e, solve_in_frame(a, n, edge.x1, edge.x2, edge.z_e));
    }

    double exact_diffraction_path_length(const Point3 &tx, const Point3 &rx, const WindowEdge &edge)
    {
        return diffraction_point(tx, rx, edge).path_length;
    }

    DiffractionSolution approx_diffraction_point(const Point3 &tx, const Point3 &rx_candidate, const WindowEdge &edge, double w)
    {
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("approx_diffraction_point: window height must be finite and non-negative");
        if (!tx.allFinite() || !rx_candidate.allFinite())
            throw std::invalid_argument("approx_diffraction_point: non-finite input");
        edge.validate();
        const Point3 a = edge.to_local(tx);
        const Point3 n = edge.to_local(rx_candidate);
        const double z_e = n.z() + 0.5 * w;
        return finish(edge, z_e, solve_in_frame(a, n, edge.x1, edge.x2, z_e));
    }

    double approx_diffraction_path_length(const Point3 &tx, const Point3 &rx_candidate, const WindowEdge &edge, double w)
    {
        return approx_diffraction_point(tx, rx_candidate, edge, w).path_length;
    }
}
