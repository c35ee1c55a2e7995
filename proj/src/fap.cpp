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

#include "diffpos/fap.hpp"
#include "diffpos/constants.hpp"
#include "diffpos/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace diffpos
{
    FapSelection select_fap(const Pdp &pdp, double t_fap_db)
    {
        if (pdp.mpcs.empty())
            throw no_detection_error("select_fap: empty power delay profile");
        if (!std::isfinite(t_fap_db) || t_fap_db < 0.0)
            throw std::invalid_argument("select_fap: t_fap must be finite and non-negative");

        FapSelection out;
        out.t_fap = t_fap_db;
        out.s_max = std::max_element(pdp.mpcs.begin(), pdp.mpcs.end(), [](const Mpc &a, const Mpc &b) { return a.snr < b.snr; })->snr;
        out.threshold = out.s_max - t_fap_db;

        const Mpc *best = nullptr;
        for (const auto &m : pdp.mpcs)
        {
            if (m.snr < out.threshold)
                continue;
            if (!best || m.tof < best->tof || (m.tof == best->tof && m.snr > best->snr))
                best = &m;
        }
        out.chosen = *best;
        return out;
    }

    double mean_squared_bandwidth(double bandwidth_hz)
    {
        if (!(bandwidth_hz > 0.0))
            throw std::invalid_argument("mean_squared_bandwidth: bandwidth must be positive");
        return bandwidth_hz * bandwidth_hz / 12.0;
    }

    double mean_squared_bandwidth(const Band &band)
    {
        return mean_squared_bandwidth(band.bandwidth);
    }

    double mean_squared_bandwidth(std::span<const SpectrumSample> spectrum, SpectrumKind kind)
    {
        double num = 0.0, den = 0.0;
        if (kind == SpectrumKind::discrete)
        {
            for (const auto &s : spectrum)
            {
                num += s.frequency * s.frequency * s.power;
                den += s.power;
            }
        }
        else
        {
            if (spectrum.size() < 2)
                throw std::invalid_argument("mean_squared_bandwidth: sampled spectrum needs two or more points");
            for (std::size_t i = 1; i < spectrum.size(); ++i)
            {
                const auto &l = spectrum[i - 1];
                const auto &r = spectrum[i];
                const double df = r.frequency - l.frequency;
                if (!(df > 0.0))
                    throw std::invalid_argument("mean_squared_bandwidth: frequencies must increase");
                num += 0.5 * df * (l.frequency * l.frequency * l.power + r.frequency * r.frequency * r.power);
                den += 0.5 * df * (l.power + r.power);
            }
        }
        if (!(den > 0.0))
            throw std::invalid_argument("mean_squared_bandwidth: spectrum carries no power");
        return num / den;
    }

    double ranging_crlb_std_seconds(double beta_sq, double snr_linear)
    {
        if (!(beta_sq > 0.0) || !(snr_linear > 0.0))
            throw std::invalid_argument("ranging_crlb_std_seconds: beta^2 and SNR must be positive");
        return 1.0 / std::sqrt(8.0 * pi * pi * beta_sq * snr_linear);
    }

    double db_to_linear(double db)
    {
        return std::pow(10.0, db / 10.0);
    }

    RangeMeasurement noiseless_measurement(const FapSelection &fap, double beta_sq)
    {
        RangeMeasurement m;
        m.anchor_id = fap.chosen.anchor_id;
        m.range = fap.chosen.path_length;
        m.sigma = speed_of_light * ranging_crlb_std_seconds(beta_sq, db_to_linear(fap.chosen.snr));
        m.fap_group = fap.chosen.group;
        m.snr = fap.chosen.snr;
        return m;
    }

    RangeMeasurement synthesize_measurement(const FapSelection &fap, double beta_sq, std::uint64_t rng_seed)
    {
        RangeMeasurement m = noiseless_measurement(fap, beta_sq);
        std::mt19937_64 rng(rng_seed);
        std::normal_distribution<double> noise(0.0, m.sigma);
        m.range += noise(rng);
        return m;
    }
}
