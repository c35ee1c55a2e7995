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

#ifndef DIFFPOS_DATASET_HPP
#define DIFFPOS_DATASET_HPP

#include "diffpos/channel.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace diffpos
{
    // Schema tag written on the header line of every exported file.
    inline constexpr const char *dataset_format = "diffpos-mpc";
    inline constexpr int dataset_version = 1;

    struct DatasetRecord
    {
        std::size_t rx_id = 0;
        Point3 rx = Point3::Zero();
        Mpc mpc; // anchor id lives in mpc.anchor_id
    };

    struct IngestDiagnostic
    {
        std::size_t line = 0;
        std::string message;
    };

    struct IngestResult
    {
        std::vector<DatasetRecord> records;
        // (anchor_id, rx_id) -> ToF-sorted profile
        std::map<std::pair<std::size_t, std::size_t>, Pdp> profiles;
        std::vector<IngestDiagnostic> rejected;
    };

    // Reads line-delimited JSON records. ToF, SNR (against `band` and the noise temperature)
    // and group are recomputed. Syntax errors and missing fields throw parse_error with the
    // line number; records that parse but violate an invariant are skipped and listed in
    // `rejected`.
    IngestResult ingest_dataset(std::istream &in, const Band &band, double noise_temperature_k = 290.0);
    IngestResult ingest_dataset(const std::filesystem::path &path, const Band &band, double noise_temperature_k = 290.0);

    void export_dataset(std::ostream &out, const std::vector<DatasetRecord> &records);
    void export_dataset(const std::filesystem::path &path, const std::vector<DatasetRecord> &records);

    std::vector<DatasetRecord> records_from_pdp(const Pdp &pdp, std::size_t rx_id);
}

#endif
