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

#include "diffpos/materials.hpp"
#include "diffpos/constants.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace diffpos
{
    namespace
    {
        void require_frequency(double f)
        {
            if (!(f > 0.0) || !std::isfinite(f))
                throw std::invalid_argument("frequency must be positive and finite");
        }

        bool is_vacuum(const Material &m)
        {
            return m.a == 1.0 && m.b == 0.0 && m.c == 0.0;
        }
    }

    void Material::validate() const
    {
        if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(d))
            throw std::invalid_argument("Material '" + name + "': a must be positive, b/d finite");
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument("Material '" + name + "': c must be non-negative");
    }

    void SlabSpec::validate() const
    {
        for (const auto &l : layers)
        {
            l.material.validate();
            if (!(l.thickness > 0.0) || !std::isfinite(l.thickness))
                throw std::invalid_argument("SlabSpec '" + name + "': layer thickness must be positive");
        }
    }

    void Band::validate() const
    {
        if (!(center_frequency > 0.0) || !(bandwidth > 0.0) || !std::isfinite(center_frequency) || !std::isfinite(bandwidth))
            throw std::invalid_argument("Band '" + label + "': frequency and bandwidth must be positive");
        if (!std::isfinite(tx_power_dbm) || !std::isfinite(rx_gain_db))
            throw std::invalid_argument("Band '" + label + "': non-finite power or gain");
    }

    double DiffractionLossModel::excess_db(double frequency_hz) const
    {
        require_frequency(frequency_hz);
        return l0_db + 10.0 * gamma * std::log10(frequency_hz / f0_hz);
    }

    double permittivity(const Material &m, double frequency_hz)
    {
        require_frequency(frequency_hz);
        return m.a * std::pow(frequency_hz * 1e-9, m.b);
    }

    double conductivity(const Material &m, double frequency_hz)
    {
        require_frequency(frequency_hz);
        return m.c * std::pow(frequency_hz * 1e-9, m.d);
    }

    double transmission_loss_db(const Material &m, double thickness_m, double frequency_hz)
    {
        const double eps_r = permittivity(m, frequency_hz);
        const double sigma = conductivity(m, frequency_hz);
        if (sigma == 0.0)
            return 0.0;
        const double loss_tangent = sigma / (2.0 * pi * frequency_hz * vacuum_permittivity * eps_r);
        // sqrt(1 + x^2) - 1 written to stay accurate for small loss tangents.
        const double x2 = loss_tangent * loss_tangent;
        const double root_term = x2 / (std::sqrt(1.0 + x2) + 1.0);
        return 12.27 * pi * frequency_hz * thickness_m * std::sqrt(vacuum_permeability * vacuum_permittivity * eps_r) *
               std::sqrt(root_term);
    }

    double transmission_loss_db(const SlabSpec &slab, double frequency_hz)
    {
        require_frequency(frequency_hz);
        if (slab.opaque)
            return std::numeric_limits<double>::infinity();
        double total = 0.0;
        for (const auto &l : slab.layers)
            total += transmission_loss_db(l.material, l.thickness, frequency_hz);
        return total;
    }

    double free_space_path_loss_db(double distance_m, double frequency_hz)
    {
        require_frequency(frequency_hz);
        if (!(distance_m > 0.0))
            throw std::invalid_argument("free_space_path_loss_db: distance must be positive");
        return 20.0 * std::log10(4.0 * pi * distance_m * frequency_hz / speed_of_light);
    }

    double fresnel_reflection_magnitude(const Material &m, double frequency_hz, double incidence_angle, Polarization pol)
    {
        if (!(incidence_angle >= 0.0) || !(incidence_angle < pi / 2.0))
            throw std::invalid_argument("fresnel_reflection_magnitude: angle must lie in [0, pi/2)");
        const double eps_r = permittivity(m, frequency_hz);
        const double sigma = conductivity(m, frequency_hz);
        const std::complex<double> eps(eps_r, -sigma / (2.0 * pi * frequency_hz * vacuum_permittivity));
        const double cos_t = std::cos(incidence_angle);
        const double sin_t = std::sin(incidence_angle);
        const std::complex<double> root = std::sqrt(eps - sin_t * sin_t);
        const std::complex<double> gamma = pol == Polarization::te ? (cos_t - root) / (cos_t + root)
                                                                   : (eps * cos_t - root) / (eps * cos_t + root);
        return std::abs(gamma);
    }

    double reflection_loss_db(const SlabSpec &slab, double frequency_hz, double incidence_angle, Polarization pol)
    {
        for (const auto &l : slab.layers)
        {
            if (is_vacuum(l.material))
                continue;
            const double mag = fresnel_reflection_magnitude(l.material, frequency_hz, incidence_angle, pol);
            if (mag == 0.0)
                return std::numeric_limits<double>::infinity();
            return -20.0 * std::log10(mag);
        }
        require_frequency(frequency_hz);
        return std::numeric_limits<double>::infinity();
    }

    double diffraction_loss_db(const DiffractionLossModel &model, double frequency_hz)
    {
        return model.excess_db(frequency_hz);
    }

    Material concrete() { return {"concrete", 5.31, 0.0, 0.0326, 0.8095}; }
    Material plasterboard() { return {"plasterboard", 2.94, 0.0, 0.0116, 0.7076}; }
    Material air() { return {"air", 1.0, 0.0, 0.0, 0.0}; }

    SlabSpec concrete_slab(double thickness_m)
    {
        return {"concrete_" + std::to_string(static_cast<int>(std::lround(thickness_m * 100))) + "cm", {{concrete(), thickness_m}}, false};
    }

    SlabSpec drywall_slab()
    {
        return {"drywall", {{plasterboard(), 0.013}, {air(), 0.089}, {plasterboard(), 0.013}}, false};
    }
}
