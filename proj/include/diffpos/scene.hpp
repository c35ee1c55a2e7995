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

#ifndef DIFFPOS_SCENE_HPP
#define DIFFPOS_SCENE_HPP

#include "diffpos/geometry.hpp"
#include "diffpos/materials.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace diffpos
{
    enum class SurfaceKind
    {
        exterior_wall,
        interior_wall,
        floor,
    };

    // Rectangular aperture in a surface, in the surface's (u, v) coordinates.
    struct Opening
    {
        double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 0.0;
    };

    // Axis-aligned planar slab: the plane {p[axis] = coord} restricted to u in [u0, u1] and
    // v in [v0, v1]. In-plane coordinates are (y, z) for axis 0, (x, z) for axis 1 and (x, y)
    // for axis 2. Thickness only enters through the slab's loss.
    struct Surface
    {
        std::string name;
        int axis = 0;
        double coord = 0.0;
        double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 0.0;
        std::size_t slab = 0;
        SurfaceKind kind = SurfaceKind::interior_wall;
        int outward = 0; // +1/-1 along `axis` for exterior walls, 0 otherwise
        std::vector<Opening> openings;

        Eigen::Vector3d normal() const;
        // (u, v) of a point, ignoring its coordinate along `axis`.
        Eigen::Vector2d in_plane(const Point3 &p) const;
        // True when the in-plane projection lies on solid material (inside the rectangle and
        // outside every opening).
        bool solid_at(const Point3 &p) const;
    };

    struct WindowEdgeFeature
    {
        WindowEdge edge;
        std::size_t surface = 0;
        std::size_t column = 0;
        bool top = false;
    };

    // Horizontal extent of a window stack on one wall. The positioning model ignores the true
    // edge height, so every window edge above or below another shares the same column.
    struct WindowColumn
    {
        WindowEdge edge;
        std::size_t surface = 0;
    };

    struct EnumerationLimits
    {
        int max_transmissions = 6;
        int max_reflections = 6;
        int max_diffractions = 1;
    };

    struct Bounds
    {
        Point3 min = Point3::Zero();
        Point3 max = Point3::Zero();

        Point3 clamp(const Point3 &p) const { return p.cwiseMax(min).cwiseMin(max); }
        Point3 centroid() const { return 0.5 * (min + max); }
    };

    // Radio parameters applied to a carrier according to the frequency range it falls in.
    struct BandRule
    {
        std::string label;
        double max_frequency_hz = 0.0; // exclusive upper bound
        double tx_power_dbm = 20.0;
        double rx_gain_db = 0.0;
    };

    struct BandPlan
    {
        double bandwidth_hz = 400e6;
        std::vector<BandRule> rules;

        Band band_for(double frequency_hz) const;
        static BandPlan defaults();
    };

    struct SceneConfig
    {
        std::vector<SlabSpec> slabs;
        std::vector<Surface> surfaces;
        std::optional<std::size_t> ground_slab; // ground reflection off z = ground_z
        double ground_z = 0.0;

        std::vector<Point3> anchors;
        std::vector<Point3> receivers;
        Bounds bounds;
        double receiver_spacing = 2.0;

        EnumerationLimits limits;
        DiffractionLossModel diffraction;
        Polarization polarization = Polarization::te;
        double noise_temperature_k = 290.0;
        double min_snr_db = -10.0;
        std::size_t top_k = 25;
        double window_height = 2.0; // w used by the positioning model
        BandPlan bands = BandPlan::defaults();

        std::vector<WindowEdgeFeature> edges;
        std::vector<WindowColumn> columns;

        // Rebuilds `edges` and `columns` from surface openings. Call after editing surfaces.
        void index_windows();
        void validate() const;
    };

    struct MaterialLibrary
    {
        std::map<std::string, Material> materials;
        std::map<std::string, SlabSpec> slabs;

        static MaterialLibrary defaults();
    };

    // Parametric rectangular building. Floors are numbered from 1; floor k spans
    // z in [(k - 1) h, k h]. Windows repeat along every exterior wall on every floor.
    struct BuildingLayout
    {
        double x0 = 0.0, y0 = 0.0;
        double width = 40.0; // along x
        double depth = 20.0; // along y
        int floors = 7;
        double floor_height = 3.5;

        std::string exterior_slab = "concrete_wall";
        std::string interior_slab = "drywall";
        std::string floor_slab = "concrete_floor";
        std::string ground_slab = "ground";
        bool ground_reflection = true;

        std::vector<double> interior_walls_x{10.0, 20.0, 30.0};
        std::vector<double> interior_walls_y{10.0};

        double window_width = 2.0;
        double window_pitch = 5.0; // centre spacing along a wall
        double window_sill = 1.2;  // above floor
        double window_height = 1.6;

        std::vector<int> receiver_floors{3, 4};
        double receiver_spacing = 2.0;
        double receiver_height = 0.4; // above floor; window_sill - window_height / 2

        std::vector<Point3> anchors;

        static BuildingLayout defaults();
        // Full-size variant: floors 3-7 at 0.5 m spacing.
        static BuildingLayout full_scale();
    };

    SceneConfig make_scene(const BuildingLayout &layout, const MaterialLibrary &library);

    // Desk-scale default building with the default material library.
    SceneConfig build_default_scene();
}

#endif
