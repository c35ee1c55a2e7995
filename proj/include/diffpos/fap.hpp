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

#ifndef DIFFPOS_FAP_HPP
#define DIFFPOS_FAP_HPP

#include "diffpos/channel.hpp"

#include <cstdint>
#include <span>

namespace diffpos
{
    struct FapSelection
    {
        Mpc chosen;
        double s_max = 0.0;     // strongest SNR in the profile, dB
        double threshold = 0.0; // s_max - t_fap, dB
        double t_fap = 0.0;     // dB
    };

    struct RangeMeasurement
    {
        std::size_t anchor_id = 0;
        double range = 0.0; // m
        double sigma = 0.0; // m
        MpcGroup fap_group = MpcGroup::mpc1;
        double snr = 0.0; // dB
    };

    // One line of a sampled power spectrum |X(f)|^2.
    struct SpectrumSample
    {
        double frequency = 0.0; // baseband offset, Hz
        double power = 0.0;
    };

    enum class SpectrumKind
    {
        sampled,  // continuous spectrum, integrated with the trapezoid rule
        discrete, // line spectrum, summed
    };

    // Earliest component whose SNR is within t_fap dB of the strongest one; ToF ties go to the
    // higher SNR. Throws no_detection_error on an empty profile.
    FapSelection select_fap(const Pdp &pdp, double t_fap_db);

    // Flat baseband spectrum over [-B/2, B/2]: B^2 / 12.
    double mean_squared_bandwidth(double bandwidth_hz);
    double mean_squared_bandwidth(const Band &band);
    double mean_squared_bandwidth(std::span<const SpectrumSample> spectrum, SpectrumKind kind);

    // Standard deviation bound on ToF: 1 / sqrt(8 pi^2 beta^2 snr).
    double ranging_crlb_std_seconds(double beta_sq, double snr_linear);

    double db_to_linear(double db);

    // Range = FAP length + N(0, sigma^2), sigma = c * ranging CRLB at the FAP's SNR.
    // Deterministic for a given seed.
    RangeMeasurement synthesize_measurement(const FapSelection &fap, double beta_sq, std::uint64_t rng_seed);

    // Same, with the noise draw suppressed (sigma still reported).
    RangeMeasurement noiseless_measurement(const FapSelection &fap, double beta_sq);
}

#endif
