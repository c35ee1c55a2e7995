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

#ifndef DIFFPOS_MATERIALS_HPP
#define DIFFPOS_MATERIALS_HPP

#include <string>
#include <vector>

namespace diffpos
{
    // Power-law material fit: eps_r' = a f^b, sigma = c f^d with f in GHz.
    struct Material
    {
        std::string name;
        double a = 1.0;
        double b = 0.0;
        double c = 0.0;
        double d = 0.0;

        void validate() const;
    };

    struct SlabLayer
    {
        Material material;
        double thickness = 0.0; // m
    };

    // Layer stack crossed as a unit. An opaque slab blocks every path through it.
    struct SlabSpec
    {
        std::string name;
        std::vector<SlabLayer> layers;
        bool opaque = false;

        void validate() const;
    };

    struct Band
    {
        std::string label;
        double center_frequency = 3.5e9; // Hz
        double bandwidth = 400e6;        // Hz
        double tx_power_dbm = 20.0;
        double rx_gain_db = 0.0;

        void validate() const;
    };

    enum class Polarization
    {
        te,
        tm
    };

    // Excess loss of an edge-diffracted path over free space: L0 + 10 gamma log10(f / f0).
    struct DiffractionLossModel
    {
        double l0_db = 10.0;
        double gamma = 0.5;
        double f0_hz = 1e9;

        double excess_db(double frequency_hz) const;
    };

    double permittivity(const Material &m, double frequency_hz);

    double conductivity(const Material &m, double frequency_hz);

    // Attenuation through one homogeneous layer of the given thickness, in dB.
    double transmission_loss_db(const Material &m, double thickness_m, double frequency_hz);

    // Sum of layer losses; +inf for opaque slabs.
    double transmission_loss_db(const SlabSpec &slab, double frequency_hz);

    double free_space_path_loss_db(double distance_m, double frequency_hz);

    // |Gamma| of a plane wave incident from vacuum on a lossy half-space.
    double fresnel_reflection_magnitude(const Material &m, double frequency_hz, double incidence_angle, Polarization pol);

    // -20 log10 |Gamma| for the slab's first non-vacuum layer treated as a half-space.
    // Returns +inf when the slab is index matched to free space.
    double reflection_loss_db(const SlabSpec &slab, double frequency_hz, double incidence_angle, Polarization pol);

    double diffraction_loss_db(const DiffractionLossModel &model, double frequency_hz);

    // Seed values for the default material table.
    Material concrete();
    Material plasterboard();
    Material air();
    SlabSpec concrete_slab(double thickness_m = 0.30);
    SlabSpec drywall_slab();
}

#endif
