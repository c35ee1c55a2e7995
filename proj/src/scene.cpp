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

#include "diffpos/scene.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace diffpos
{
    Eigen::Vector3d Surface::normal() const
    {
        Eigen::Vector3d n = Eigen::Vector3d::Zero();
        n[axis] = 1.0;
        return n;
    }

    Eigen::Vector2d Surface::in_plane(const Point3 &p) const
    {
        switch (axis)
        {
        case 0: return {p.y(), p.z()};
        case 1: return {p.x(), p.z()};
        default: return {p.x(), p.y()};
        }
    }

    bool Surface::solid_at(const Point3 &p) const
    {
        const Eigen::Vector2d uv = in_plane(p);
        if (uv.x() < u0 || uv.x() > u1 || uv.y() < v0 || uv.y() > v1)
            return false;
        for (const auto &o : openings)
            if (uv.x() > o.u0 && uv.x() < o.u1 && uv.y() > o.v0 && uv.y() < o.v1)
                return false;
        return true;
    }

    Band BandPlan::band_for(double frequency_hz) const
    {
        if (!(frequency_hz > 0.0))
            throw std::invalid_argument("BandPlan::band_for: frequency must be positive");
        for (const auto &r : rules)
        {
            if (frequency_hz < r.max_frequency_hz)
                return {r.label, frequency_hz, bandwidth_hz, r.tx_power_dbm, r.rx_gain_db};
        }
        throw std::invalid_argument("BandPlan::band_for: no band rule covers " + std::to_string(frequency_hz) + " Hz");
    }

    BandPlan BandPlan::defaults()
    {
        BandPlan p;
        p.bandwidth_hz = 400e6;
        p.rules = {
            {"FR1", 7.125e9, 20.0, 0.0},
            {"FR3", 24.25e9, 30.0, 0.0},
            {"FR2", std::numeric_limits<double>::infinity(), 30.0, 20.0},
        };
        return p;
    }

    void SceneConfig::index_windows()
    {
        edges.clear();
        columns.clear();
        std::map<std::tuple<std::size_t, double, double>, std::size_t> column_of;

        for (std::size_t s = 0; s < surfaces.size(); ++s)
        {
            const Surface &surf = surfaces[s];
            if (surf.axis == 2)
                continue;
            for (const auto &o : surf.openings)
            {
                auto world = [&](double u, double z) {
                    return surf.axis == 0 ? Point3(surf.coord, u, z) : Point3(u, surf.coord, z);
                };
                const double w = o.v1 - o.v0;
                const auto key = std::make_tuple(s, o.u0, o.u1);
                auto it = column_of.find(key);
                if (it == column_of.end())
                {
                    it = column_of.emplace(key, columns.size()).first;
                    columns.push_back({WindowEdge::from_world(world(o.u0, o.v0), world(o.u1, o.v0), w), s});
                }
                edges.push_back({WindowEdge::from_world(world(o.u0, o.v0), world(o.u1, o.v0), w), s, it->second, false});
                edges.push_back({WindowEdge::from_world(world(o.u0, o.v1), world(o.u1, o.v1), w), s, it->second, true});
            }
        }
    }

    void SceneConfig::validate() const
    {
        if (!(receiver_spacing > 0.0))
            throw std::invalid_argument("SceneConfig: receiver spacing must be positive");
        if (limits.max_transmissions < 0 || limits.max_reflections < 0 || limits.max_diffractions < 0)
            throw std::invalid_argument("SceneConfig: enumeration limits must be non-negative");
        if (!(window_height > 0.0))
            throw std::invalid_argument("SceneConfig: window height must be positive");
        if (top_k == 0)
            throw std::invalid_argument("SceneConfig: top_k must be at least 1");
        for (const auto &s : slabs)
            s.validate();
        for (const auto &s : surfaces)
        {
            if (s.slab >= slabs.size())
                throw std::invalid_argument("SceneConfig: surface '" + s.name + "' references an unknown slab");
            if (s.axis < 0 || s.axis > 2 || !(s.u1 > s.u0) || !(s.v1 > s.v0))
                throw std::invalid_argument("SceneConfig: surface '" + s.name + "' has an empty extent");
        }
        if (ground_slab && *ground_slab >= slabs.size())
            throw std::invalid_argument("SceneConfig: ground references an unknown slab");
        for (const auto &a : anchors)
            if (!a.allFinite())
                throw std::invalid_argument("SceneConfig: non-finite anchor");
        for (const auto &r : receivers)
            if (!r.allFinite())
                throw std::invalid_argument("SceneConfig: non-finite receiver");
    }

    MaterialLibrary MaterialLibrary::defaults()
    {
        MaterialLibrary lib;
        for (const auto &m : {concrete(), plasterboard(), air()})
            lib.materials[m.name] = m;
        lib.slabs["concrete_wall"] = {"concrete_wall", {{concrete(), 0.30}}, false};
        lib.slabs["concrete_floor"] = {"concrete_floor", {{concrete(), 0.30}}, false};
        lib.slabs["ground"] = {"ground", {{concrete(), 0.30}}, false};
        auto dw = drywall_slab();
        lib.slabs[dw.name] = dw;
        return lib;
    }

    BuildingLayout BuildingLayout::defaults()
    {
        BuildingLayout l;
        l.anchors = {
            {14.0, -25.0, 4.0},
            {65.0, 8.0, 6.5},
            {26.0, 45.0, 5.0},
            {-25.0, 13.0, 6.0},
        };
        return l;
    }

    BuildingLayout BuildingLayout::full_scale()
    {
        BuildingLayout l = defaults();
        l.receiver_floors = {3, 4, 5, 6, 7};
        l.receiver_spacing = 0.5;
        return l;
    }

    SceneConfig make_scene(const BuildingLayout &layout, const MaterialLibrary &library)
    {
        if (layout.floors < 1 || !(layout.floor_height > 0.0) || !(layout.width > 0.0) || !(layout.depth > 0.0))
            throw std::invalid_argument("make_scene: building dimensions must be positive");
        if (!(layout.receiver_spacing > 0.0))
            throw std::invalid_argument("make_scene: receiver spacing must be positive");
        if (!(layout.window_height > 0.0) || !(layout.window_width > 0.0) || !(layout.window_pitch >= layout.window_width))
            throw std::invalid_argument("make_scene: invalid window geometry");
        if (layout.window_sill + layout.window_height > layout.floor_height)
            throw std::invalid_argument("make_scene: window does not fit within a floor");

        SceneConfig scene;
        std::map<std::string, std::size_t> slab_index;
        auto slab = [&](const std::string &name) {
            if (auto it = slab_index.find(name); it != slab_index.end())
                return it->second;
            auto it = library.slabs.find(name);
            if (it == library.slabs.end())
                throw std::invalid_argument("make_scene: unknown slab '" + name + "'");
            slab_index[name] = scene.slabs.size();
            scene.slabs.push_back(it->second);
            return scene.slabs.size() - 1;
        };

        const double x0 = layout.x0, x1 = layout.x0 + layout.width;
        const double y0 = layout.y0, y1 = layout.y0 + layout.depth;
        const double height = layout.floors * layout.floor_height;

        auto windows_along = [&](double start, double length) {
            std::vector<Opening> out;
            for (int k = 1; k <= layout.floors; ++k)
            {
                const double sill = (k - 1) * layout.floor_height + layout.window_sill;
                for (int i = 0;; ++i)
                {
                    const double c = (i + 0.5) * layout.window_pitch;
                    if (c + 0.5 * layout.window_width > length + 1e-9)
                        break;
                    out.push_back({start + c - 0.5 * layout.window_width, start + c + 0.5 * layout.window_width, sill, sill + layout.window_height});
                }
            }
            return out;
        };

        const std::size_t ext = slab(layout.exterior_slab);
        scene.surfaces.push_back({"wall_south", 1, y0, x0, x1, 0.0, height, ext, SurfaceKind::exterior_wall, -1, windows_along(x0, layout.width)});
        scene.surfaces.push_back({"wall_north", 1, y1, x0, x1, 0.0, height, ext, SurfaceKind::exterior_wall, +1, windows_along(x0, layout.width)});
        scene.surfaces.push_back({"wall_west", 0, x0, y0, y1, 0.0, height, ext, SurfaceKind::exterior_wall, -1, windows_along(y0, layout.depth)});
        scene.surfaces.push_back({"wall_east", 0, x1, y0, y1, 0.0, height, ext, SurfaceKind::exterior_wall, +1, windows_along(y0, layout.depth)});

        const std::size_t inner = slab(layout.interior_slab);
        for (double x : layout.interior_walls_x)
        {
            if (!(x > x0 && x < x1))
                throw std::invalid_argument("make_scene: interior wall outside the footprint");
            scene.surfaces.push_back({"partition_x" + std::to_string(x), 0, x, y0, y1, 0.0, height, inner, SurfaceKind::interior_wall, 0, {}});
        }
        for (double y : layout.interior_walls_y)
        {
            if (!(y > y0 && y < y1))
                throw std::invalid_argument("make_scene: interior wall outside the footprint");
            scene.surfaces.push_back({"partition_y" + std::to_string(y), 1, y, x0, x1, 0.0, height, inner, SurfaceKind::interior_wall, 0, {}});
        }

        const std::size_t fl = slab(layout.floor_slab);
        for (int k = 1; k <= layout.floors; ++k)
            scene.surfaces.push_back({"slab_" + std::to_string(k), 2, k * layout.floor_height, x0, x1, y0, y1, fl, SurfaceKind::floor, 0, {}});

        if (layout.ground_reflection)
            scene.ground_slab = slab(layout.ground_slab);
        scene.ground_z = 0.0;

        scene.anchors = layout.anchors;
        const double s = layout.receiver_spacing;
        for (int k : layout.receiver_floors)
        {
            if (k < 1 || k > layout.floors)
                throw std::invalid_argument("make_scene: receiver floor out of range");
            const double z = (k - 1) * layout.floor_height + layout.receiver_height;
            for (int i = 0; x0 + (i + 0.5) * s < x1; ++i)
                for (int j = 0; y0 + (j + 0.5) * s < y1; ++j)
                    scene.receivers.emplace_back(x0 + (i + 0.5) * s, y0 + (j + 0.5) * s, z);
        }

        scene.bounds = {Point3(x0, y0, 0.0), Point3(x1, y1, height)};
        scene.receiver_spacing = s;
        scene.window_height = layout.window_height;
        scene.index_windows();
        scene.validate();
        return scene;
    }

    SceneConfig build_default_scene()
    {
        return make_scene(BuildingLayout::defaults(), MaterialLibrary::defaults());
    }
}
