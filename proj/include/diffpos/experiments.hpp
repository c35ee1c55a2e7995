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

#ifndef DIFFPOS_EXPERIMENTS_HPP
#define DIFFPOS_EXPERIMENTS_HPP

#include "diffpos/fap.hpp"
#include "diffpos/positioning.hpp"
#include "diffpos/scene.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace diffpos
{
    std::vector<double> default_frequency_ladder();

    struct SweepConfig
    {
        SceneConfig scene;
        std::vector<double> frequencies_hz = default_frequency_ladder();
        double t_fap_db = 20.0;
        int trials = 1; // noisy range draws per receiver
        std::uint64_t seed = 1;
        bool noiseless = false;
        unsigned threads = 0; // 0: hardware concurrency
        int max_reassociations = 3;
        DnlsOptions dnls;
        std::filesystem::path output_dir = "results";

        void validate() const;
    };

    struct Quartiles
    {
        std::size_t count = 0;
        double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;

        bool operator==(const Quartiles &) const = default;
    };

    // Linear-interpolated quartiles; all zero for an empty sample.
    Quartiles quartiles(std::vector<double> samples);

    struct PFapStats
    {
        std::array<std::size_t, 4> counts{};
        std::array<double, 4> percent{};
        std::size_t total = 0;
    };

    // groups[tx][rx] is the FAP group of that link. Percentages are normalised by
    // N_tx * N_rx so the four groups partition 100 %.
    PFapStats p_fap_stats(const std::vector<std::vector<MpcGroup>> &groups);

    struct FrequencyReport
    {
        double frequency_hz = 0.0;
        std::string band;
        std::size_t receivers = 0;
        std::size_t trials = 0;

        std::array<std::size_t, 4> fap_counts{};
        std::array<double, 4> p_fap{};
        std::size_t undetected_links = 0;
        Quartiles fap_snr;

        std::vector<double> dnls_errors; // sorted, m
        std::vector<double> lls_errors;  // sorted, m
        std::vector<double> peb;         // sorted, m
        std::size_t dnls_excluded = 0;
        std::size_t dnls_not_converged = 0;
        std::size_t lls_excluded = 0;
        std::size_t peb_excluded = 0;

        // Receivers whose FAPs are all diffraction paths; RMS over that subset.
        std::size_t mpc3_only = 0;
        double mpc3_only_rms_peb = 0.0;
        double mpc3_only_rms_dnls = 0.0;

        bool operator==(const FrequencyReport &) const = default;
    };

    struct SweepReport
    {
        std::vector<FrequencyReport> frequencies;

        bool operator==(const SweepReport &) const = default;
    };

    SweepReport run_sweep(const SweepConfig &cfg);

    // Writes p_fap.csv, fap_snr.csv, summary.csv and cdf_<k>_<estimator>.csv.
    void export_report(const SweepReport &report, const std::filesystem::path &dir);
    SweepReport read_report(const std::filesystem::path &dir);

    // Window column whose approximate model path is shortest from `anchor` to `alpha`, among
    // columns on walls whose outward side faces the anchor.
    std::size_t associate_column(const SceneConfig &scene, const Point3 &anchor, const Point3 &alpha);
}

#endif
