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

// Shared geometries for the positioning tests and the acceptance run.

#ifndef DIFFPOS_TESTS_FIXTURES_HPP
#define DIFFPOS_TESTS_FIXTURES_HPP

#include "diffpos/positioning.hpp"

#include <random>

namespace fixture
{
    using diffpos::Point3;

    // Receiver inside a 40 x 20 m footprint, one anchor off each facade, each paired with a
    // 2 m window edge on the facade it faces.
    inline const Point3 reference_truth{12.0, 8.0, 7.4};

    inline diffpos::MeasurementSet reference_geometry(double w = 1.6)
    {
        using diffpos::WindowEdge;
        diffpos::MeasurementSet m;
        m.window_height = w;
        m.entries = {
            {{14.0, -25.0, 4.0}, 0.0, 1.0, WindowEdge::from_world({11.0, 0.0, 8.2}, {13.0, 0.0, 8.2}, w)},
            {{65.0, 8.0, 6.5}, 0.0, 1.0, WindowEdge::from_world({40.0, 7.0, 8.2}, {40.0, 9.0, 8.2}, w)},
            {{26.0, 45.0, 5.0}, 0.0, 1.0, WindowEdge::from_world({16.0, 20.0, 8.2}, {18.0, 20.0, 8.2}, w)},
            {{-25.0, 13.0, 11.0}, 0.0, 1.0, WindowEdge::from_world({0.0, 10.0, 8.2}, {0.0, 12.0, 8.2}, w)},
        };
        return m;
    }

    // Fills every range with the model length at `truth`.
    inline void set_model_ranges(diffpos::MeasurementSet &m, const Point3 &truth)
    {
        const Eigen::VectorXd p = diffpos::diffraction_model(truth, m);
        for (std::size_t j = 0; j < m.entries.size(); ++j)
            m.entries[j].range = p[static_cast<Eigen::Index>(j)];
    }

    // Random receiver in the footprint with edges on the facades facing four random anchors.
    inline diffpos::MeasurementSet random_geometry(std::mt19937_64 &rng, Point3 &truth, double w = 1.6)
    {
        std::uniform_real_distribution<double> ux(4.0, 36.0), uy(3.0, 17.0), uz(1.0, 20.0), off(-1.5, 1.5), dz(4.0, 12.0),
            far(8.0, 25.0);
        truth = {ux(rng), uy(rng), uz(rng)};
        diffpos::MeasurementSet m = reference_geometry(w);
        const double ze = truth.z() + 0.5 * w;
        // two anchors below the edge height and two above, for vertical diversity
        const auto az = [&](double sign) { return ze + sign * dz(rng); };
        const double cx = truth.x() + off(rng), cy = truth.y() + off(rng);
        m.entries[0].anchor = {cx + 3.0 * off(rng), -far(rng), az(-1.0)};
        m.entries[0].edge = diffpos::WindowEdge::from_world({cx - 1.0, 0.0, ze}, {cx + 1.0, 0.0, ze}, w);
        m.entries[1].anchor = {40.0 + far(rng), cy + 3.0 * off(rng), az(+1.0)};
        m.entries[1].edge = diffpos::WindowEdge::from_world({40.0, cy - 1.0, ze}, {40.0, cy + 1.0, ze}, w);
        m.entries[2].anchor = {cx + 3.0 * off(rng), 20.0 + far(rng), az(-1.0)};
        m.entries[2].edge = diffpos::WindowEdge::from_world({cx - 1.0, 20.0, ze}, {cx + 1.0, 20.0, ze}, w);
        m.entries[3].anchor = {-far(rng), cy + 3.0 * off(rng), az(+1.0)};
        m.entries[3].edge = diffpos::WindowEdge::from_world({0.0, cy - 1.0, ze}, {0.0, cy + 1.0, ze}, w);
        set_model_ranges(m, truth);
        return m;
    }
}

#endif
