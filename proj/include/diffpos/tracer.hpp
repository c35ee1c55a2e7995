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

#ifndef DIFFPOS_TRACER_HPP
#define DIFFPOS_TRACER_HPP

#include "diffpos/channel.hpp"
#include "diffpos/scene.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace diffpos
{
    // Frequency-independent description of one path: interactions, length and the slabs it
    // loses power in. Evaluated per band by `evaluate_paths`.
    struct TracedPath
    {
        std::vector<Interaction> interactions;
        double length = 0.0;
        std::vector<std::size_t> crossed_slabs;
        std::optional<std::size_t> reflector_slab;
        double incidence_angle = 0.0;
        int edge_id = -1;
    };

    // Direct path, single specular reflections off every surface and the ground, and single
    // diffractions at every horizontal window edge, each with the transmissions its legs pick
    // up. Paths exceeding the scene's enumeration limits are dropped.
    std::vector<TracedPath> trace_paths(const SceneConfig &scene, const Point3 &anchor, const Point3 &rx);

    // Received power and SNR for each traced path at the band's carrier. Components below the
    // scene's detection SNR (including blocked ones) are dropped; the result is ToF-sorted and
    // may be empty.
    Pdp evaluate_paths(const std::vector<TracedPath> &paths, const SceneConfig &scene, std::size_t anchor_id,
                       const Point3 &rx, const Band &band);

    Pdp enumerate_mpcs(const SceneConfig &scene, std::size_t anchor_id, const Point3 &rx, const Band &band);
    // Radio parameters from the scene's band plan.
    Pdp enumerate_mpcs(const SceneConfig &scene, std::size_t anchor_id, const Point3 &rx, double frequency_hz);

    // Slab indices crossed by the open segment a -> b, skipping surface `skip`.
    std::vector<std::size_t> slab_crossings(const SceneConfig &scene, const Point3 &a, const Point3 &b, std::size_t skip = SIZE_MAX);
}

#endif
