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

#include "fixtures.hpp"
#include "oracles.hpp"

#include "diffpos/error.hpp"
#include "diffpos/fap.hpp"
#include "diffpos/positioning.hpp"

#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace diffpos;
using Catch::Approx;

namespace
{
    // Model length with the edge lifted to z_n + w / 2, minimised over the infinite-precision
    // free parameter by golden section.
    double oracle_model(const Point3 &anchor, const Point3 &p1, const Point3 &p2, double w, const Point3 &rx)
    {
        Point3 a = p1, b = p2;
        a.z() = b.z() = rx.z() + 0.5 * w;
        return oracle::fermat_edge_length(anchor, rx, a, b);
    }

    double median(std::vector<double> v)
    {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

    MeasurementSet los_set(const std::vector<Point3> &anchors, const Point3 &truth)
    {
        MeasurementSet m;
        for (const auto &a : anchors)
            m.entries.push_back({a, (a - truth).norm(), 1.0, WindowEdge{}});
        return m;
    }
}

TEST_CASE("jacobian matches finite differences", "[positioning]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-20.0, 20.0), uw(0.5, 2.5), len(0.5, 6.0), ang(0.0, 2.0 * M_PI);
    double worst = 0.0;
    int done = 0;
    while (done < 1000)
    {
        const Point3 c(u(rng), u(rng), u(rng));
        const double half = len(rng), th = ang(rng);
        const Eigen::Vector3d dir(std::cos(th), std::sin(th), 0.0);
        const Point3 p1 = c - half * dir, p2 = c + half * dir;
        const double w = uw(rng);
        const Point3 anchor = oracle::random_point(rng, -40.0, 40.0);
        const Point3 rx = oracle::random_point(rng, -20.0, 20.0);

        const Eigen::Vector3d nrm(-dir.y(), dir.x(), 0.0);
        if (std::abs(nrm.dot(anchor - c)) < 1.0 || std::abs(nrm.dot(rx - c)) < 1.0)
            continue;

        MeasurementSet m;
        m.window_height = w;
        m.entries.push_back({anchor, 0.0, 1.0, WindowEdge::from_world(p1, p2, w)});
        const Eigen::Vector3d jac = diffraction_jacobian(rx, m).col(0);
        const Eigen::Vector3d fd = oracle::gradient([&](const Point3 &x) { return oracle_model(anchor, p1, p2, w, x); }, rx, 1e-5);
        worst = std::max(worst, (jac - fd).cwiseAbs().maxCoeff());
        ++done;
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("jacobian special cases", "[positioning]")
{
    MeasurementSet m;
    m.window_height = 1.0;
    m.entries.push_back({{0.0, -10.0, 5.0}, 0.0, 1.0, WindowEdge::from_world({-1.0, 0.0, 2.0}, {1.0, 0.0, 2.0}, 1.0)});
    const auto sym = diffraction_jacobian({0.0, 5.0, 3.0}, m);
    CHECK(std::abs(sym(0, 0)) < 1e-15);
    CHECK(sym(1, 0) > 0.0);

    // w = 0: the edge sits at receiver height and the path unfolds into two straight legs
    m.window_height = 0.0;
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i)
    {
        Point3 rx = oracle::random_point(rng, -5.0, 5.0);
        rx.y() = std::abs(rx.y()) + 0.5;
        const Point3 a = m.entries[0].anchor;
        const auto unfolded = [&](const Point3 &x) {
            return oracle::fermat_edge_length(a, x, {-1.0, 0.0, x.z()}, {1.0, 0.0, x.z()});
        };
        const Eigen::Vector3d fd = oracle::gradient(unfolded, rx, 1e-5);
        CHECK((diffraction_jacobian(rx, m).col(0) - fd).cwiseAbs().maxCoeff() <= 1e-6);
    }
    CHECK_THROWS_AS(diffraction_jacobian({0.0, 0.0, 2.0}, m), singular_geometry_error);
}

TEST_CASE("gauss-newton recovers noiseless truth", "[positioning]")
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> r(0.0, 2.0);
    for (int i = 0; i < 100; ++i)
    {
        Point3 truth;
        const MeasurementSet m = fixture::random_geometry(rng, truth);
        Eigen::Vector3d d(g(rng), g(rng), g(rng));
        const Point3 init = truth + r(rng) * d.normalized();
        const auto est = dnls_solve(m, init);
        CHECK(est.converged);
        CHECK((est.position - truth).norm() <= 1e-6);
        CHECK(est.residual_norm < 1e-6);

        DnlsOptions weighted;
        weighted.weighted = true;
        CHECK((dnls_solve(m, init, weighted).position - truth).norm() <= 1e-6);
    }

    MeasurementSet m = fixture::reference_geometry();
    fixture::set_model_ranges(m, fixture::reference_truth);
    const auto fixed = dnls_solve(m, fixture::reference_truth);
    CHECK(fixed.iterations == 1);
    CHECK((fixed.position - fixture::reference_truth).norm() < 1e-12);
}

TEST_CASE("gauss-newton failure modes", "[positioning]")
{
    MeasurementSet m = fixture::reference_geometry();
    fixture::set_model_ranges(m, fixture::reference_truth);

    MeasurementSet three = m;
    three.entries.pop_back();
    CHECK_THROWS_AS(dnls_solve(three, fixture::reference_truth), std::invalid_argument);
    CHECK_THROWS_AS(dnls_solve(m, Point3(NAN, 0, 0)), std::invalid_argument);

    // every anchor level with the model edge: no vertical information
    const Point3 init = fixture::reference_truth;
    MeasurementSet flat = m;
    for (auto &e : flat.entries)
        e.anchor.z() = init.z() + 0.5 * flat.window_height;
    CHECK_THROWS_AS(dnls_solve(flat, init), singular_geometry_error);
    DnlsOptions damped;
    damped.damping = 1e-3;
    CHECK_NOTHROW(dnls_solve(flat, init, damped));

    MeasurementSet same = m;
    for (auto &e : same.entries)
        e = m.entries[0];
    CHECK_THROWS_AS(dnls_solve(same, init), singular_geometry_error);
}

TEST_CASE("initial guess and basin", "[positioning]")
{
    MeasurementSet m = fixture::reference_geometry();
    fixture::set_model_ranges(m, fixture::reference_truth);
    const Bounds box{Point3(0, 0, 0), Point3(40, 20, 24.5)};

    const Point3 guess = initial_guess(m, box);
    CHECK((guess.array() >= box.min.array()).all());
    CHECK((guess.array() <= box.max.array()).all());
    const auto lls = lls_solve(m);
    CHECK((guess - box.clamp(lls.position)).norm() == 0.0);
    const auto est = dnls_solve(m, guess);
    CHECK(est.converged);
    CHECK((est.position - fixture::reference_truth).norm() < 1e-6);

    MeasurementSet same = m;
    for (auto &e : same.entries)
        e = m.entries[0];
    CHECK(initial_guess(same, box) == box.centroid());

    // far starts either land on the truth or say that they did not
    for (const Point3 far : {Point3(1e4, -3e4, 5e3), Point3(-200, 300, -100), Point3(14.0, -24.0, 4.0)})
    {
        try
        {
            const auto r = dnls_solve(m, far);
            const bool found = (r.position - fixture::reference_truth).norm() < 1e-6;
            CHECK((found || !r.converged || r.residual_norm > 1e-6));
        }
        catch (const std::runtime_error &)
        {
            SUCCEED("divergence reported");
        }
    }
}

TEST_CASE("squared-range linearisation", "[positioning]")
{
    const std::vector<Point3> anchors{{0, 0, 0}, {10, 0, 0}, {0, 10, 0}, {0, 0, 10}};
    const Point3 truth(3, 4, 5);
    const auto est = lls_solve(los_set(anchors, truth));
    CHECK((est.position - truth).norm() <= 1e-9);

    MeasurementSet dup = los_set({{0, 0, 0}, {10, 0, 0}, {10, 0, 0}, {0, 10, 0}}, truth);
    CHECK_THROWS_AS(lls_solve(dup), singular_geometry_error);
    MeasurementSet planar = los_set({{0, 0, 0}, {10, 0, 0}, {0, 10, 0}, {7, 3, 0}}, truth);
    CHECK_THROWS_AS(lls_solve(planar), singular_geometry_error);

    MeasurementSet m = fixture::reference_geometry();
    fixture::set_model_ranges(m, fixture::reference_truth);
    CHECK((lls_solve(m).position - fixture::reference_truth).norm() > 1e-3);
}

TEST_CASE("position error bound", "[positioning]")
{
    const MeasurementSet m = fixture::reference_geometry();
    const Point3 &truth = fixture::reference_truth;
    const double beta = mean_squared_bandwidth(400e6);
    const std::vector<double> snr{100.0, 40.0, 250.0, 75.0};

    const FimResult base = peb(truth, m, snr, beta);
    REQUIRE(base.invertible);
    CHECK((base.fim - base.fim.transpose()).norm() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(base.fim).eigenvalues().minCoeff() > 0.0);
    CHECK(base.peb == Approx(std::sqrt(base.fim.inverse().trace())).epsilon(1e-10));

    std::vector<double> twice = snr;
    for (auto &s : twice)
        s *= 2.0;
    CHECK(peb(truth, m, twice, beta).peb == Approx(base.peb / std::sqrt(2.0)).epsilon(1e-12));

    // FIM from first principles: per-anchor range information times the outer product of the
    // numerical gradient
    Eigen::Matrix3d fim = Eigen::Matrix3d::Zero();
    for (std::size_t j = 0; j < m.entries.size(); ++j)
    {
        MeasurementSet one = m;
        one.entries = {m.entries[j]};
        const Eigen::Vector3d g = oracle::gradient([&](const Point3 &x) { return diffraction_model(x, one)[0]; }, truth, 1e-5);
        const double sigma = 299792458.0 * ranging_crlb_std_seconds(beta, snr[j]);
        fim += g * g.transpose() / (sigma * sigma);
    }
    CHECK((fim - base.fim).norm() <= 1e-6 * base.fim.norm());

    std::vector<std::size_t> order{2, 0, 3, 1};
    MeasurementSet relabelled = m;
    std::vector<double> snr2(4);
    for (std::size_t j = 0; j < 4; ++j)
    {
        relabelled.entries[j] = m.entries[order[j]];
        snr2[j] = snr[order[j]];
    }
    CHECK((peb(truth, relabelled, snr2, beta).fim - base.fim).norm() <= 1e-12 * base.fim.norm());

    Eigen::Isometry3d motion = Eigen::Isometry3d::Identity();
    motion.rotate(Eigen::AngleAxisd(0.7, Eigen::Vector3d(0.3, -0.5, 0.8).normalized()));
    motion.pretranslate(Eigen::Vector3d(5.0, -2.0, 11.0));
    MeasurementSet moved = m;
    for (auto &e : moved.entries)
    {
        e.anchor = motion * e.anchor;
        e.edge = e.edge.transformed(motion);
    }
    CHECK(peb(motion * truth, moved, snr, beta).peb == Approx(base.peb).epsilon(1e-9));

    MeasurementSet single = m;
    single.entries.resize(1);
    const FimResult rank1 = peb(truth, single, std::vector<double>{100.0}, beta);
    CHECK_FALSE(rank1.invertible);
    CHECK(std::isinf(rank1.peb));

    CHECK_THROWS_AS(peb(truth, m, std::vector<double>{1.0}, beta), std::invalid_argument);
    CHECK_THROWS_AS(peb(truth, m, snr, 0.0), std::invalid_argument);
}

TEST_CASE("model mismatch direction", "[positioning]")
{
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 0.02);
    const Bounds box{Point3(0, 0, 0), Point3(40, 20, 24.5)};
    std::vector<double> diff_dnls, diff_lls, los_dnls, los_lls;
    for (int i = 0; i < 60; ++i)
    {
        Point3 truth;
        MeasurementSet m = fixture::random_geometry(rng, truth);
        for (auto &e : m.entries)
            e.range += noise(rng);
        diff_lls.push_back((lls_solve(m).position - truth).norm());
        try
        {
            diff_dnls.push_back((dnls_solve(m, initial_guess(m, box)).position - truth).norm());
        }
        catch (const std::runtime_error &)
        {
            diff_dnls.push_back(1e9);
        }

        MeasurementSet los = m;
        for (auto &e : los.entries)
            e.range = (e.anchor - truth).norm() + noise(rng);
        los_lls.push_back((lls_solve(los).position - truth).norm());
        try
        {
            los_dnls.push_back((dnls_solve(los, initial_guess(los, box)).position - truth).norm());
        }
        catch (const std::runtime_error &)
        {
            los_dnls.push_back(1e9);
        }
    }
    CHECK(median(diff_dnls) < median(diff_lls));
    CHECK(median(los_lls) < median(los_dnls));
}
