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

#include "diffpos/positioning.hpp"
#include "diffpos/constants.hpp"
#include "diffpos/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace diffpos
{
    namespace
    {
        constexpr double rank_tolerance = 1e-12;
    }

    Eigen::VectorXd MeasurementSet::ranges() const
    {
        Eigen::VectorXd r(entries.size());
        for (std::size_t j = 0; j < entries.size(); ++j)
            r[static_cast<Eigen::Index>(j)] = entries[j].range;
        return r;
    }

    void MeasurementSet::validate(std::size_t min_anchors) const
    {
        if (entries.size() < min_anchors)
            throw std::invalid_argument("MeasurementSet: need at least " + std::to_string(min_anchors) + " anchors");
        if (!std::isfinite(window_height) || window_height < 0.0)
            throw std::invalid_argument("MeasurementSet: window height must be finite and non-negative");
        for (const auto &e : entries)
        {
            if (!e.anchor.allFinite() || !std::isfinite(e.range))
                throw std::invalid_argument("MeasurementSet: non-finite anchor or range");
            if (!(e.sigma > 0.0))
                throw std::invalid_argument("MeasurementSet: sigma must be positive");
        }
    }

    Eigen::VectorXd diffraction_model(const Point3 &alpha, const MeasurementSet &meas)
    {
        Eigen::VectorXd p(meas.size());
        for (std::size_t j = 0; j < meas.size(); ++j)
        {
            const auto &e = meas.entries[j];
            p[static_cast<Eigen::Index>(j)] = approx_diffraction_path_length(e.anchor, alpha, e.edge, meas.window_height);
        }
        return p;
    }

    Eigen::Matrix<double, 3, Eigen::Dynamic> diffraction_jacobian(const Point3 &alpha, const MeasurementSet &meas)
    {
        const double half_w = 0.5 * meas.window_height;
        Eigen::Matrix<double, 3, Eigen::Dynamic> jac(3, meas.size());
        for (std::size_t j = 0; j < meas.size(); ++j)
        {
            const auto &e = meas.entries[j];
            const DiffractionSolution sol = approx_diffraction_point(e.anchor, alpha, e.edge, meas.window_height);
            const Point3 a = e.edge.to_local(e.anchor);
            const Point3 n = e.edge.to_local(alpha);
            const Point3 q = e.edge.to_local(sol.q);
            const double z_e = n.z() + half_w;

            const double l1 = std::sqrt((a.x() - q.x()) * (a.x() - q.x()) + a.y() * a.y() + (a.z() - z_e) * (a.z() - z_e));
            const double l2 = std::sqrt((n.x() - q.x()) * (n.x() - q.x()) + n.y() * n.y() + half_w * half_w);
            if (!(l1 > 0.0) || !(l2 > 0.0))
                throw singular_geometry_error("diffraction_jacobian: point lies on the diffracting edge");

            // z_n enters leg 1 through z_e; leg 2's vertical offset is fixed at w / 2.
            const Eigen::Vector3d grad_local((n.x() - q.x()) / l2, n.y() / l2, -(a.z() - z_e) / l1);
            jac.col(static_cast<Eigen::Index>(j)) = e.edge.frame.linear().transpose() * grad_local;
        }
        return jac;
    }

    PositionEstimate dnls_solve(const MeasurementSet &meas, const Point3 &init, const DnlsOptions &options)
    {
        meas.validate(4);
        if (!init.allFinite())
            throw std::invalid_argument("dnls_solve: non-finite initial point");
        if (options.max_iterations < 1 || !(options.tolerance > 0.0) || options.damping < 0.0)
            throw std::invalid_argument("dnls_solve: invalid options");

        const Eigen::VectorXd r = meas.ranges();
        Eigen::VectorXd weight = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(meas.size()));
        if (options.weighted)
            for (std::size_t j = 0; j < meas.size(); ++j)
                weight[static_cast<Eigen::Index>(j)] = 1.0 / (meas.entries[j].sigma * meas.entries[j].sigma);

        PositionEstimate est;
        est.position = init;
        for (int it = 1; it <= options.max_iterations; ++it)
        {
            const auto jac = diffraction_jacobian(est.position, meas);
            const Eigen::VectorXd residual = r - diffraction_model(est.position, meas);

            Eigen::Matrix3d normal = jac * weight.asDiagonal() * jac.transpose();
            if (options.damping > 0.0)
                normal += options.damping * Eigen::Matrix3d::Identity();
            else
            {
                const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normal, Eigen::EigenvaluesOnly);
                const double top = eig.eigenvalues().maxCoeff();
                if (!(top > 0.0) || eig.eigenvalues().minCoeff() <= rank_tolerance * top)
                    throw singular_geometry_error("dnls_solve: rank-deficient J^T J");
            }

            const Eigen::Vector3d step = normal.ldlt().solve(jac * weight.asDiagonal() * residual);
            est.position += step;
            est.iterations = it;
            if (!est.position.allFinite())
                throw numerical_error("dnls_solve: non-finite iterate at iteration " + std::to_string(it));
            if (step.norm() < options.tolerance)
            {
                est.converged = true;
                break;
            }
        }
        est.residual_norm = (r - diffraction_model(est.position, meas)).norm();
        return est;
    }

    PositionEstimate lls_solve(const MeasurementSet &meas)
    {
        meas.validate(4);
        const auto m = static_cast<Eigen::Index>(meas.size());
        const Point3 &x0 = meas.entries[0].anchor;
        const double r0 = meas.entries[0].range;

        Eigen::MatrixXd a(m - 1, 3);
        Eigen::VectorXd b(m - 1);
        for (Eigen::Index j = 1; j < m; ++j)
        {
            const auto &e = meas.entries[static_cast<std::size_t>(j)];
            a.row(j - 1) = 2.0 * (e.anchor - x0).transpose();
            b[j - 1] = r0 * r0 - e.range * e.range + e.anchor.squaredNorm() - x0.squaredNorm();
        }

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        qr.setThreshold(1e-10);
        if (qr.rank() < 3)
            throw singular_geometry_error("lls_solve: anchors are coplanar or duplicated");

        PositionEstimate est;
        est.position = qr.solve(b);
        est.iterations = 0;
        est.converged = est.position.allFinite();
        double ss = 0.0;
        for (const auto &e : meas.entries)
        {
            const double d = e.range - (e.anchor - est.position).norm();
            ss += d * d;
        }
        est.residual_norm = std::sqrt(ss);
        return est;
    }

    FimResult fim_from_jacobian(const Eigen::Matrix<double, 3, Eigen::Dynamic> &jacobian, std::span<const double> inverse_variance)
    {
        if (static_cast<std::size_t>(jacobian.cols()) != inverse_variance.size())
            throw std::invalid_argument("fim_from_jacobian: size mismatch");
        FimResult out;
        for (Eigen::Index j = 0; j < jacobian.cols(); ++j)
            out.fim += inverse_variance[static_cast<std::size_t>(j)] * jacobian.col(j) * jacobian.col(j).transpose();
        out.fim = (0.5 * (out.fim + out.fim.transpose())).eval();

        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(out.fim);
        const double top = eig.eigenvalues().maxCoeff();
        const double bottom = eig.eigenvalues().minCoeff();
        out.condition = bottom > 0.0 ? top / bottom : std::numeric_limits<double>::infinity();
        if (!(top > 0.0) || bottom <= rank_tolerance * top)
        {
            out.invertible = false;
            out.peb = std::numeric_limits<double>::infinity();
            return out;
        }
        out.invertible = true;
        out.inverse = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
        out.peb = std::sqrt(out.inverse.trace());
        return out;
    }

    FimResult peb(const Point3 &alpha_true, const MeasurementSet &geometry, std::span<const double> snr_linear, double beta_sq)
    {
        if (snr_linear.size() != geometry.size())
            throw std::invalid_argument("peb: one SNR per anchor required");
        if (!(beta_sq > 0.0))
            throw std::invalid_argument("peb: beta^2 must be positive");
        std::vector<double> info(geometry.size());
        for (std::size_t j = 0; j < info.size(); ++j)
        {
            if (!(snr_linear[j] > 0.0))
                throw std::invalid_argument("peb: SNR must be positive");
            // 8 pi^2 beta^2 SNR is the inverse ToF variance; dividing by c^2 converts to range.
            info[j] = 8.0 * pi * pi * beta_sq * snr_linear[j] / (speed_of_light * speed_of_light);
        }
        return fim_from_jacobian(diffraction_jacobian(alpha_true, geometry), info);
    }

    Point3 initial_guess(const MeasurementSet &meas, const Bounds &bounds)
    {
        try
        {
            const PositionEstimate lls = lls_solve(meas);
            if (lls.position.allFinite())
                return bounds.clamp(lls.position);
        }
        catch (const singular_geometry_error &)
        {
        }
        return bounds.centroid();
    }
}
