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

#ifndef DIFFPOS_CHANNEL_HPP
#define DIFFPOS_CHANNEL_HPP

#include "diffpos/geometry.hpp"
#include "diffpos/materials.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diffpos
{
    enum class Interaction
    {
        transmission,       // T
        reflection,         // R
        diffraction,        // D
        diffuse_scattering, // DS
    };

    // Path-model family of a multipath component.
    enum class MpcGroup
    {
        mpc1 = 1, // direct, any number of transmissions: Euclidean model
        mpc2 = 2, // one reflection then transmissions: Euclidean model (virtual source)
        mpc3 = 3, // one diffraction then transmissions: diffraction model
        mpc4 = 4, // everything else: model mismatch
    };

    struct Mpc
    {
        std::vector<Interaction> interactions;
        double path_length = 0.0; // m
        double tof = 0.0;         // s
        double rx_power = 0.0;    // dBm
        double snr = 0.0;         // dB
        std::size_t anchor_id = 0;
        MpcGroup group = MpcGroup::mpc1;
        int edge_id = -1; // index of the diffracting window edge, -1 if none
    };

    // Power delay profile for one (anchor, receiver) pair, sorted by ToF.
    struct Pdp
    {
        std::vector<Mpc> mpcs;
        Point3 receiver = Point3::Zero();
        std::size_t anchor_id = 0;
    };

    // Parses "Tx-T-D-Rx". Throws std::invalid_argument on unknown symbols or missing Tx/Rx.
    std::vector<Interaction> parse_interactions(std::string_view path);

    std::string format_interactions(std::span<const Interaction> interactions);

    MpcGroup classify_mpc(std::span<const Interaction> interactions);
    MpcGroup classify_mpc(std::string_view path);

    std::string_view group_name(MpcGroup g);

    // kTB in dBm.
    double noise_floor_dbm(double bandwidth_hz, double noise_temperature_k = 290.0);

    double snr_db(double rx_power_dbm, const Band &band, double noise_temperature_k = 290.0);
    double snr_db(const Mpc &mpc, const Band &band, double noise_temperature_k = 290.0);

    double time_of_flight(double path_length_m);

    // Keeps the k strongest components (ties broken by earlier ToF), returned in ToF order.
    Pdp truncate_top_k(const Pdp &pdp, std::size_t k = 25);

    void sort_by_tof(Pdp &pdp);
}

#endif
