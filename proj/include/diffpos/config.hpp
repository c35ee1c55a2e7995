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

#ifndef DIFFPOS_CONFIG_HPP
#define DIFFPOS_CONFIG_HPP

#include "diffpos/experiments.hpp"
#include "diffpos/scene.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace diffpos
{
    // Everything the command-line tool reads from a config file. Absent keys keep their
    // defaults; unknown keys are rejected.
    struct ProjectConfig
    {
        MaterialLibrary library = MaterialLibrary::defaults();
        BuildingLayout layout = BuildingLayout::defaults();

        EnumerationLimits limits;
        DiffractionLossModel diffraction;
        Polarization polarization = Polarization::te;
        double noise_temperature_k = 290.0;
        double min_snr_db = -10.0;
        std::size_t top_k = 25;
        BandPlan bands = BandPlan::defaults();

        std::vector<double> frequencies_hz = default_frequency_ladder();
        double t_fap_db = 20.0;
        int trials = 1;
        std::uint64_t seed = 1;
        bool noiseless = false;
        unsigned threads = 0;
        int max_reassociations = 3;
        DnlsOptions dnls;
        std::filesystem::path output_dir = "results";

        SceneConfig build_scene() const;
        SweepConfig sweep_config() const;
    };

    std::string dump_config(const ProjectConfig &cfg);
    ProjectConfig parse_config(std::string_view text);

    ProjectConfig load_config(const std::filesystem::path &path);
    void save_config(const std::filesystem::path &path, const ProjectConfig &cfg);
}

#endif
