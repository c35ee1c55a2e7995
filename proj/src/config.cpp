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

#include "diffpos/config.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace diffpos
{
    using nlohmann::json;

    SceneConfig ProjectConfig::build_scene() const
    {
        SceneConfig scene = make_scene(layout, library);
        scene.limits = limits;
        scene.diffraction = diffraction;
        scene.polarization = polarization;
        scene.noise_temperature_k = noise_temperature_k;
        scene.min_snr_db = min_snr_db;
        scene.top_k = top_k;
        scene.bands = bands;
        scene.validate();
        return scene;
    }

    SweepConfig ProjectConfig::sweep_config() const
    {
        SweepConfig s;
        s.scene = build_scene();
        s.frequencies_hz = frequencies_hz;
        s.t_fap_db = t_fap_db;
        s.trials = trials;
        s.seed = seed;
        s.noiseless = noiseless;
        s.threads = threads;
        s.max_reassociations = max_reassociations;
        s.dnls = dnls;
        s.output_dir = output_dir;
        s.validate();
        return s;
    }

    namespace
    {
        [[noreturn]] void fail(const std::string &what)
        {
            throw std::invalid_argument("config: " + what);
        }

        void only_keys(const json &j, const std::string &where, std::initializer_list<const char *> keys)
        {
            if (!j.is_object())
                fail(where + " must be an object");
            for (const auto &[k, v] : j.items())
            {
                bool known = false;
                for (const char *key : keys)
                    known = known || k == key;
                if (!known)
                    fail("unknown key '" + k + "' in " + where);
            }
        }

        template <typename T>
        void read(const json &j, const char *key, T &dst, const std::string &where)
        {
            const auto it = j.find(key);
            if (it == j.end())
                return;
            try
            {
                dst = it->get<T>();
            }
            catch (const json::exception &)
            {
                fail("'" + std::string(key) + "' in " + where + " has the wrong type");
            }
        }

        json point(const Point3 &p)
        {
            return json::array({p.x(), p.y(), p.z()});
        }

        Point3 to_point(const json &j)
        {
            if (!j.is_array() || j.size() != 3)
                fail("positions must be [x, y, z]");
            return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
        }

        json materials_json(const MaterialLibrary &lib)
        {
            json out = json::object();
            for (const auto &[name, m] : lib.materials)
                out[name] = {{"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d}};
            return out;
        }

        json slabs_json(const MaterialLibrary &lib)
        {
            json out = json::object();
            for (const auto &[name, s] : lib.slabs)
            {
                json layers = json::array();
                for (const auto &l : s.layers)
                    layers.push_back({{"material", l.material.name}, {"thickness_m", l.thickness}});
                out[name] = {{"layers", layers}, {"opaque", s.opaque}};
            }
            return out;
        }

        json building_json(const BuildingLayout &l)
        {
            json anchors = json::array();
            for (const auto &a : l.anchors)
                anchors.push_back(point(a));
            return {
                {"x0", l.x0},
                {"y0", l.y0},
                {"width", l.width},
                {"depth", l.depth},
                {"floors", l.floors},
                {"floor_height", l.floor_height},
                {"exterior_slab", l.exterior_slab},
                {"interior_slab", l.interior_slab},
                {"floor_slab", l.floor_slab},
                {"ground_slab", l.ground_slab},
                {"ground_reflection", l.ground_reflection},
                {"interior_walls_x", l.interior_walls_x},
                {"interior_walls_y", l.interior_walls_y},
                {"window_width", l.window_width},
                {"window_pitch", l.window_pitch},
                {"window_sill", l.window_sill},
                {"window_height", l.window_height},
                {"receiver_floors", l.receiver_floors},
                {"receiver_spacing", l.receiver_spacing},
                {"receiver_height", l.receiver_height},
                {"anchors", anchors},
            };
        }

        void parse_materials(const json &j, MaterialLibrary &lib)
        {
            if (!j.is_object())
                fail("materials must be an object");
            for (const auto &[name, v] : j.items())
            {
                const std::string where = "materials." + name;
                only_keys(v, where, {"a", "b", "c", "d"});
                Material m = lib.materials.count(name) ? lib.materials[name] : Material{};
                m.name = name;
                read(v, "a", m.a, where);
                read(v, "b", m.b, where);
                read(v, "c", m.c, where);
                read(v, "d", m.d, where);
                m.validate();
                lib.materials[name] = m;
            }
        }

        void parse_slabs(const json &j, MaterialLibrary &lib)
        {
            if (!j.is_object())
                fail("slabs must be an object");
            for (const auto &[name, v] : j.items())
            {
                const std::string where = "slabs." + name;
                only_keys(v, where, {"layers", "opaque"});
                SlabSpec s;
                s.name = name;
                read(v, "opaque", s.opaque, where);
                if (!v.contains("layers") || !v["layers"].is_array())
                    fail(where + ".layers must be an array");
                for (const auto &l : v["layers"])
                {
                    only_keys(l, where + ".layers[]", {"material", "thickness_m"});
                    std::string mat;
                    double t = 0.0;
                    read(l, "material", mat, where);
                    read(l, "thickness_m", t, where);
                    const auto it = lib.materials.find(mat);
                    if (it == lib.materials.end())
                        fail("slab '" + name + "' uses unknown material '" + mat + "'");
                    s.layers.push_back({it->second, t});
                }
                s.validate();
                lib.slabs[name] = s;
            }
        }

        void parse_building(const json &j, BuildingLayout &l)
        {
            const std::string w = "building";
            only_keys(j, w,
                      {"x0", "y0", "width", "depth", "floors", "floor_height", "exterior_slab", "interior_slab",
                       "floor_slab", "ground_slab", "ground_reflection", "interior_walls_x", "interior_walls_y",
                       "window_width", "window_pitch", "window_sill", "window_height", "receiver_floors",
                       "receiver_spacing", "receiver_height", "anchors"});
            read(j, "x0", l.x0, w);
            read(j, "y0", l.y0, w);
            read(j, "width", l.width, w);
            read(j, "depth", l.depth, w);
            read(j, "floors", l.floors, w);
            read(j, "floor_height", l.floor_height, w);
            read(j, "exterior_slab", l.exterior_slab, w);
            read(j, "interior_slab", l.interior_slab, w);
            read(j, "floor_slab", l.floor_slab, w);
            read(j, "ground_slab", l.ground_slab, w);
            read(j, "ground_reflection", l.ground_reflection, w);
            read(j, "interior_walls_x", l.interior_walls_x, w);
            read(j, "interior_walls_y", l.interior_walls_y, w);
            read(j, "window_width", l.window_width, w);
            read(j, "window_pitch", l.window_pitch, w);
            read(j, "window_sill", l.window_sill, w);
            read(j, "window_height", l.window_height, w);
            read(j, "receiver_floors", l.receiver_floors, w);
            read(j, "receiver_spacing", l.receiver_spacing, w);
            read(j, "receiver_height", l.receiver_height, w);
            if (j.contains("anchors"))
            {
                if (!j["anchors"].is_array())
                    fail("building.anchors must be an array");
                l.anchors.clear();
                for (const auto &a : j["anchors"])
                    l.anchors.push_back(to_point(a));
            }
        }

        void parse_radio(const json &j, ProjectConfig &cfg)
        {
            const std::string w = "radio";
            only_keys(j, w, {"bandwidth_hz", "noise_temperature_k", "bands"});
            read(j, "bandwidth_hz", cfg.bands.bandwidth_hz, w);
            read(j, "noise_temperature_k", cfg.noise_temperature_k, w);
            if (j.contains("bands"))
            {
                if (!j["bands"].is_array())
                    fail("radio.bands must be an array");
                cfg.bands.rules.clear();
                for (const auto &b : j["bands"])
                {
                    only_keys(b, "radio.bands[]", {"label", "max_frequency_hz", "tx_power_dbm", "rx_gain_db"});
                    BandRule r;
                    read(b, "label", r.label, w);
                    r.max_frequency_hz = std::numeric_limits<double>::infinity();
                    if (b.contains("max_frequency_hz") && !b["max_frequency_hz"].is_null())
                        read(b, "max_frequency_hz", r.max_frequency_hz, w);
                    read(b, "tx_power_dbm", r.tx_power_dbm, w);
                    read(b, "rx_gain_db", r.rx_gain_db, w);
                    cfg.bands.rules.push_back(r);
                }
            }
        }

        void parse_propagation(const json &j, ProjectConfig &cfg)
        {
            const std::string w = "propagation";
            only_keys(j, w,
                      {"max_transmissions", "max_reflections", "max_diffractions", "diffraction", "polarization",
                       "min_snr_db", "top_k"});
            read(j, "max_transmissions", cfg.limits.max_transmissions, w);
            read(j, "max_reflections", cfg.limits.max_reflections, w);
            read(j, "max_diffractions", cfg.limits.max_diffractions, w);
            read(j, "min_snr_db", cfg.min_snr_db, w);
            read(j, "top_k", cfg.top_k, w);
            if (j.contains("polarization"))
            {
                const auto p = j["polarization"];
                if (p == "te")
                    cfg.polarization = Polarization::te;
                else if (p == "tm")
                    cfg.polarization = Polarization::tm;
                else
                    fail("propagation.polarization must be \"te\" or \"tm\"");
            }
            if (j.contains("diffraction"))
            {
                const auto &d = j["diffraction"];
                only_keys(d, "propagation.diffraction", {"l0_db", "gamma", "f0_hz"});
                read(d, "l0_db", cfg.diffraction.l0_db, w);
                read(d, "gamma", cfg.diffraction.gamma, w);
                read(d, "f0_hz", cfg.diffraction.f0_hz, w);
            }
        }

        void parse_sweep(const json &j, ProjectConfig &cfg)
        {
            const std::string w = "sweep";
            only_keys(j, w,
                      {"frequencies_hz", "t_fap_db", "trials", "seed", "noiseless", "threads", "max_reassociations",
                       "output_dir", "dnls"});
            read(j, "frequencies_hz", cfg.frequencies_hz, w);
            read(j, "t_fap_db", cfg.t_fap_db, w);
            read(j, "trials", cfg.trials, w);
            read(j, "seed", cfg.seed, w);
            read(j, "noiseless", cfg.noiseless, w);
            read(j, "threads", cfg.threads, w);
            read(j, "max_reassociations", cfg.max_reassociations, w);
            if (j.contains("output_dir"))
            {
                std::string dir;
                read(j, "output_dir", dir, w);
                cfg.output_dir = dir;
            }
            if (j.contains("dnls"))
            {
                const auto &d = j["dnls"];
                only_keys(d, "sweep.dnls", {"max_iterations", "tolerance", "weighted", "damping"});
                read(d, "max_iterations", cfg.dnls.max_iterations, w);
                read(d, "tolerance", cfg.dnls.tolerance, w);
                read(d, "weighted", cfg.dnls.weighted, w);
                read(d, "damping", cfg.dnls.damping, w);
            }
        }
    }

    std::string dump_config(const ProjectConfig &cfg)
    {
        json bands = json::array();
        for (const auto &r : cfg.bands.rules)
        {
            json b = {{"label", r.label}, {"tx_power_dbm", r.tx_power_dbm}, {"rx_gain_db", r.rx_gain_db}};
            b["max_frequency_hz"] = std::isfinite(r.max_frequency_hz) ? json(r.max_frequency_hz) : json(nullptr);
            bands.push_back(b);
        }
        json j = {
            {"materials", materials_json(cfg.library)},
            {"slabs", slabs_json(cfg.library)},
            {"building", building_json(cfg.layout)},
            {"radio", {{"bandwidth_hz", cfg.bands.bandwidth_hz}, {"noise_temperature_k", cfg.noise_temperature_k}, {"bands", bands}}},
            {"propagation",
             {{"max_transmissions", cfg.limits.max_transmissions},
              {"max_reflections", cfg.limits.max_reflections},
              {"max_diffractions", cfg.limits.max_diffractions},
              {"diffraction", {{"l0_db", cfg.diffraction.l0_db}, {"gamma", cfg.diffraction.gamma}, {"f0_hz", cfg.diffraction.f0_hz}}},
              {"polarization", cfg.polarization == Polarization::te ? "te" : "tm"},
              {"min_snr_db", cfg.min_snr_db},
              {"top_k", cfg.top_k}}},
            {"sweep",
             {{"frequencies_hz", cfg.frequencies_hz},
              {"t_fap_db", cfg.t_fap_db},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"noiseless", cfg.noiseless},
              {"threads", cfg.threads},
              {"max_reassociations", cfg.max_reassociations},
              {"output_dir", cfg.output_dir.string()},
              {"dnls",
               {{"max_iterations", cfg.dnls.max_iterations},
                {"tolerance", cfg.dnls.tolerance},
                {"weighted", cfg.dnls.weighted},
                {"damping", cfg.dnls.damping}}}}},
        };
        return j.dump(2) + "\n";
    }

    ProjectConfig parse_config(std::string_view text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            fail(e.what());
        }
        only_keys(j, "top level", {"materials", "slabs", "building", "radio", "propagation", "sweep"});
        ProjectConfig cfg;
        if (j.contains("materials"))
        {
            parse_materials(j["materials"], cfg.library);
            // slabs hold material copies; refresh them so edited materials take effect
            for (auto &[name, s] : cfg.library.slabs)
                for (auto &l : s.layers)
                    if (auto it = cfg.library.materials.find(l.material.name); it != cfg.library.materials.end())
                        l.material = it->second;
        }
        if (j.contains("slabs"))
            parse_slabs(j["slabs"], cfg.library);
        if (j.contains("building"))
            parse_building(j["building"], cfg.layout);
        if (j.contains("radio"))
            parse_radio(j["radio"], cfg);
        if (j.contains("propagation"))
            parse_propagation(j["propagation"], cfg);
        if (j.contains("sweep"))
            parse_sweep(j["sweep"], cfg);
        return cfg;
    }

    ProjectConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config '" + path.string() + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str());
    }

    void save_config(const std::filesystem::path &path, const ProjectConfig &cfg)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write config '" + path.string() + "'");
        out << dump_config(cfg);
        if (!out.flush())
            throw std::runtime_error("cannot write config '" + path.string() + "'");
    }
}
