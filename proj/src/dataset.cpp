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

#include "diffpos/dataset.hpp"
#include "diffpos/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace diffpos
{
    using nlohmann::json;

    namespace
    {
        template <typename T>
        T field(const json &j, const char *key, std::size_t line)
        {
            const auto it = j.find(key);
            if (it == j.end())
                throw parse_error(line, std::string("missing field '") + key + "'");
            try
            {
                return it->get<T>();
            }
            catch (const json::exception &)
            {
                throw parse_error(line, std::string("field '") + key + "' has the wrong type");
            }
        }

        bool is_blank(const std::string &s)
        {
            return s.find_first_not_of(" \t\r") == std::string::npos;
        }
    }

    IngestResult ingest_dataset(std::istream &in, const Band &band, double noise_temperature_k)
    {
        band.validate();
        IngestResult out;
        std::string text;
        std::size_t line = 0;
        while (std::getline(in, text))
        {
            ++line;
            if (is_blank(text))
                continue;
            json j;
            try
            {
                j = json::parse(text);
            }
            catch (const json::parse_error &e)
            {
                throw parse_error(line, std::string("invalid JSON: ") + e.what());
            }
            if (!j.is_object())
                throw parse_error(line, "record is not a JSON object");

            if (j.contains("format"))
            {
                if (j["format"] != dataset_format || field<int>(j, "version", line) != dataset_version)
                    throw parse_error(line, "unsupported dataset format or version");
                continue;
            }

            DatasetRecord rec;
            rec.mpc.anchor_id = field<std::size_t>(j, "anchor_id", line);
            rec.rx_id = field<std::size_t>(j, "rx_id", line);
            const auto xyz = field<std::vector<double>>(j, "rx_xyz", line);
            if (xyz.size() != 3)
                throw parse_error(line, "rx_xyz must have three components");
            rec.rx = Point3(xyz[0], xyz[1], xyz[2]);
            const auto path = field<std::string>(j, "interactions", line);
            rec.mpc.path_length = field<double>(j, "path_length_m", line);
            rec.mpc.rx_power = field<double>(j, "rx_power_dbm", line);
            if (j.contains("edge_id"))
                rec.mpc.edge_id = field<int>(j, "edge_id", line);

            auto reject = [&](std::string why) { out.rejected.push_back({line, std::move(why)}); };

            try
            {
                rec.mpc.interactions = parse_interactions(path);
            }
            catch (const std::invalid_argument &e)
            {
                reject(e.what());
                continue;
            }
            if (!rec.rx.allFinite())
            {
                reject("non-finite receiver position");
                continue;
            }
            if (!std::isfinite(rec.mpc.path_length) || !(rec.mpc.path_length > 0.0))
            {
                reject("path length must be positive and finite");
                continue;
            }
            if (!std::isfinite(rec.mpc.rx_power))
            {
                reject("received power must be finite");
                continue;
            }

            rec.mpc.tof = time_of_flight(rec.mpc.path_length);
            if (j.contains("tof_s"))
            {
                const double tof = field<double>(j, "tof_s", line);
                if (!(std::abs(tof - rec.mpc.tof) <= 1e-6 * rec.mpc.tof))
                {
                    reject("tof_s disagrees with path_length_m / c");
                    continue;
                }
            }
            rec.mpc.snr = snr_db(rec.mpc.rx_power, band, noise_temperature_k);
            rec.mpc.group = classify_mpc(rec.mpc.interactions);
            if (j.contains("group") && field<std::string>(j, "group", line) != group_name(rec.mpc.group))
            {
                reject("group label disagrees with the interaction string");
                continue;
            }

            auto &pdp = out.profiles[{rec.mpc.anchor_id, rec.rx_id}];
            pdp.anchor_id = rec.mpc.anchor_id;
            pdp.receiver = rec.rx;
            pdp.mpcs.push_back(rec.mpc);
            out.records.push_back(std::move(rec));
        }
        for (auto &[key, pdp] : out.profiles)
            sort_by_tof(pdp);
        return out;
    }

    IngestResult ingest_dataset(const std::filesystem::path &path, const Band &band, double noise_temperature_k)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open dataset '" + path.string() + "'");
        return ingest_dataset(in, band, noise_temperature_k);
    }

    void export_dataset(std::ostream &out, const std::vector<DatasetRecord> &records)
    {
        out << json{{"format", dataset_format}, {"version", dataset_version}}.dump() << '\n';
        for (const auto &r : records)
        {
            json j;
            j["anchor_id"] = r.mpc.anchor_id;
            j["rx_id"] = r.rx_id;
            j["rx_xyz"] = {r.rx.x(), r.rx.y(), r.rx.z()};
            j["interactions"] = format_interactions(r.mpc.interactions);
            j["path_length_m"] = r.mpc.path_length;
            j["tof_s"] = r.mpc.tof;
            j["rx_power_dbm"] = r.mpc.rx_power;
            j["group"] = group_name(r.mpc.group);
            if (r.mpc.edge_id >= 0)
                j["edge_id"] = r.mpc.edge_id;
            out << j.dump() << '\n';
        }
    }

    void export_dataset(const std::filesystem::path &path, const std::vector<DatasetRecord> &records)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write dataset '" + path.string() + "'");
        export_dataset(out, records);
    }

    std::vector<DatasetRecord> records_from_pdp(const Pdp &pdp, std::size_t rx_id)
    {
        std::vector<DatasetRecord> out;
        out.reserve(pdp.mpcs.size());
        for (const auto &m : pdp.mpcs)
            out.push_back({rx_id, pdp.receiver, m});
        return out;
    }
}
