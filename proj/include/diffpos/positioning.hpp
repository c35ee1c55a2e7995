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

#ifndef DIFFPOS_POSITIONING_HPP
#define DIFFPOS_POSITIONING_HPP

#include "diffpos/geometry.hpp"
#include "diffpos/scene.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace diffpos
{
    struct AnchorMeasurement
    {
        Point3 anchor = Point3::Zero();
        double range = 0.0; // m
        double sigma = 1.0; // m
        WindowEdge edge;    // window column the diffraction model uses for this anchor
    };

    struct MeasurementSet
    {
        std::vector<AnchorMeasurement> entries;
        double window_height = 2.0; // w in z_e = z_n + w / 2

        std::size_t size() const { return entries.size(); }
        Eigen::VectorXd ranges() const;
        void validate(std::size_t min_anchors) const;
    };

    struct PositionEstimate
    {
        Point3 position = Point3::Zero();
        int iterations = 0;
        bool converged = false;
        double residual_norm = 0.0; // ||r - p(alpha_hat)||, m
    };

    struct FimResult
    {
        Eigen::Matrix3d fim = Eigen::Matrix3d::Zero();     // m^-2
        Eigen::Matrix3d inverse = Eigen::Matrix3d::Zero(); // m^2, zero when not invertible
        double peb = 0.0;                                  // m, +inf when not invertible
        bool invertible = false;
        double condition = 0.0; // ratio of extreme eigenvalues
    };

    struct DnlsOptions
    {
        int max_iterations = 50;
        double tolerance = 1e-6; // step norm, m
        bool weighted = false;   // sigma^-2 weighting of the normal equations
        double damping = 0.0;    // Tikhonov term added to J^T J; 0 disables
    };

    // p(alpha): model diffraction path length from every anchor.
    Eigen::VectorXd diffraction_model(const Point3 &alpha, const MeasurementSet &meas);

    // 3 x M matrix of partials dp_j / d(x, y, z). The diffraction point is held at its Fermat
    // optimum, which contributes nothing to first order.
    Eigen::Matrix<double, 3, Eigen::Dynamic> diffraction_jacobian(const Point3 &alpha, const MeasurementSet &meas);

    // Gauss-Newton on the diffraction model. Throws singular_geometry_error on rank-deficient
    // normal equations (when damping is 0) and numerical_error on a non-finite iterate.
    PositionEstimate dnls_solve(const MeasurementSet &meas, const Point3 &init, const DnlsOptions &options = {});

    // Squared-range linearisation against the first anchor, solved in the least-squares sense.
    PositionEstimate lls_solve(const MeasurementSet &meas);

    // FIM = sum_j g_j g_j^T / sigma_j^2 with sigma_j = c / sqrt(8 pi^2 beta^2 snr_j) and g_j the
    // model gradient at the true position.
    FimResult peb(const Point3 &alpha_true, const MeasurementSet &geometry, std::span<const double> snr_linear, double beta_sq);

    FimResult fim_from_jacobian(const Eigen::Matrix<double, 3, Eigen::Dynamic> &jacobian, std::span<const double> inverse_variance);

    // LLS estimate clamped to `bounds`, or the centroid of `bounds` when LLS is singular.
    Point3 initial_guess(const MeasurementSet &meas, const Bounds &bounds);
}

#endif
