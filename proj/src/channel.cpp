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

#include "diffpos/channel.hpp"
#include "diffpos/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diffpos
{
    std::vector<Interaction> parse_interactions(std::string_view path)
    {
        std::vector<std::string_view> tokens;
        std::size_t start = 0;
        while (true)
        {
            const auto dash = path.find('-', start);
            tokens.push_back(path.substr(start, dash == std::string_view::npos ? std::string_view::npos : dash - start));
            if (dash == std::string_view::npos)
                break;
            start = dash + 1;
        }
        if (tokens.size() < 2 || tokens.front() != "Tx" || tokens.back() != "Rx")
            throw std::invalid_argument("interaction string must start with 'Tx' and end with 'Rx': " + std::string(path));

        std::vector<Interaction> out;
        out.reserve(tokens.size() - 2);
        for (std::size_t i = 1; i + 1 < tokens.size(); ++i)
        {
            const auto t = tokens[i];
            if (t == "T")
                out.push_back(Interaction::transmission);
            else if (t == "R")
                out.push_back(Interaction::reflection);
            else if (t == "D")
                out.push_back(Interaction::diffraction);
            else if (t == "DS")
                out.push_back(Interaction::diffuse_scattering);
            else
                throw std::invalid_argument("unknown interaction symbol '" + std::string(t) + "'");
        }
        return out;
    }

    std::string format_interactions(std::span<const Interaction> interactions)
    {
        std::string s = "Tx";
        for (auto i : interactions)
        {
            switch (i)
            {
            case Interaction::transmission: s += "-T"; break;
            case Interaction::reflection: s += "-R"; break;
            case Interaction::diffraction: s += "-D"; break;
            case Interaction::diffuse_scattering: s += "-DS"; break;
            }
        }
        return s + "-Rx";
    }

    MpcGroup classify_mpc(std::span<const Interaction> interactions)
    {
        if (interactions.empty())
            return MpcGroup::mpc1;
        const bool rest_all_t = std::all_of(interactions.begin() + 1, interactions.end(),
                                            [](Interaction i) { return i == Interaction::transmission; });
        if (!rest_all_t)
            return MpcGroup::mpc4;
        switch (interactions.front())
        {
        case Interaction::transmission: return MpcGroup::mpc1;
        case Interaction::reflection: return MpcGroup::mpc2;
        case Interaction::diffraction: return MpcGroup::mpc3;
        default: return MpcGroup::mpc4;
        }
    }

    MpcGroup classify_mpc(std::string_view path)
    {
        const auto parsed = parse_interactions(path);
        return classify_mpc(parsed);
    }

    std::string_view group_name(MpcGroup g)
    {
        switch (g)
        {
        case MpcGroup::mpc1: return "MPC1";
        case MpcGroup::mpc2: return "MPC2";
        case MpcGroup::mpc3: return "MPC3";
        case MpcGroup::mpc4: return "MPC4";
        }
        return "?";
    }

    double noise_floor_dbm(double bandwidth_hz, double noise_temperature_k)
    {
        if (!(bandwidth_hz > 0.0) || !(noise_temperature_k > 0.0))
            throw std::invalid_argument("noise_floor_dbm: bandwidth and temperature must be positive");
        return 10.0 * std::log10(boltzmann * noise_temperature_k * bandwidth_hz / 1e-3);
    }

    double snr_db(double rx_power_dbm, const Band &band, double noise_temperature_k)
    {
        return rx_power_dbm - noise_floor_dbm(band.bandwidth, noise_temperature_k);
    }

    double snr_db(const Mpc &mpc, const Band &band, double noise_temperature_k)
    {
        return snr_db(mpc.rx_power, band, noise_temperature_k);
    }

    double time_of_flight(double path_length_m)
    {
        return path_length_m / speed_of_light;
    }

    void sort_by_tof(Pdp &pdp)
    {
        std::stable_sort(pdp.mpcs.begin(), pdp.mpcs.end(), [](const Mpc &a, const Mpc &b) { return a.tof < b.tof; });
    }

    Pdp truncate_top_k(const Pdp &pdp, std::size_t k)
    {
        if (k == 0)
            throw std::invalid_argument("truncate_top_k: k must be at least 1");
        Pdp out = pdp;
        if (out.mpcs.size() > k)
        {
            std::stable_sort(out.mpcs.begin(), out.mpcs.end(), [](const Mpc &a, const Mpc &b) {
                if (a.snr != b.snr)
                    return a.snr > b.snr;
                return a.tof < b.tof;
            });
            out.mpcs.resize(k);
        }
        sort_by_tof(out);
        return out;
    }
}
