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

#include "diffpos/tracer.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace diffpos
{
    namespace
    {
        bool strictly_inside(const Bounds &b, const Point3 &p)
        {
            return (p.array() > b.min.array()).all() && (p.array() < b.max.array()).all();
        }

        bool has_volume(const Bounds &b)
        {
            return (b.max.array() > b.min.array()).all();
        }

        void append_transmissions(std::vector<Interaction> &out, std::size_t n)
        {
            out.insert(out.end(), n, Interaction::transmission);
        }
    }

    std::vector<std::size_t> slab_crossings(const SceneConfig &scene, const Point3 &a, const Point3 &b, std::size_t skip)
    {
        std::vector<std::size_t> out;
        for (std::size_t s = 0; s < scene.surfaces.size(); ++s)
        {
            if (s == skip)
                continue;
            const Surface &surf = scene.surfaces[s];
            const double da = a[surf.axis] - surf.coord;
            const double db = b[surf.axis] - surf.coord;
            if (!(da * db < 0.0))
                continue;
            const double t = da / (da - db);
            const Point3 p = a + t * (b - a);
            if (surf.solid_at(p))
                out.push_back(surf.slab);
        }
        return out;
    }

    std::vector<TracedPath> trace_paths(const SceneConfig &scene, const Point3 &anchor, const Point3 &rx)
    {
        if (!anchor.allFinite() || !rx.allFinite())
            throw std::invalid_argument("trace_paths: non-finite position");
        if (has_volume(scene.bounds))
        {
            if (!strictly_inside(scene.bounds, rx))
                throw std::invalid_argument("trace_paths: receiver must lie inside the building");
            if (strictly_inside(scene.bounds, anchor))
                throw std::invalid_argument("trace_paths: anchor must lie outside the building");
        }
        if ((anchor - rx).norm() == 0.0)
            throw std::invalid_argument("trace_paths: anchor and receiver coincide");

        const auto max_t = static_cast<std::size_t>(scene.limits.max_transmissions);
        std::vector<TracedPath> paths;

        {
            TracedPath direct;
            direct.length = euclidean_distance(anchor, rx);
            direct.crossed_slabs = slab_crossings(scene, anchor, rx);
            if (direct.crossed_slabs.size() <= max_t)
            {
                append_transmissions(direct.interactions, direct.crossed_slabs.size());
                paths.push_back(std::move(direct));
            }
        }

        if (scene.limits.max_reflections >= 1)
        {
            auto reflect_off = [&](const ReflectorPlane &plane, std::size_t skip, std::size_t slab, const Surface *surf) {
                const double d_tx = plane.signed_distance(anchor);
                const double d_rx = plane.signed_distance(rx);
                if (!(d_tx * d_rx > 0.0))
                    return;
                const ReflectionPath rp = reflection_path_length(anchor, rx, plane);
                if (!rp.valid || (surf && !surf->solid_at(rp.specular_point)))
                    return;
                const auto leg1 = slab_crossings(scene, anchor, rp.specular_point, skip);
                const auto leg2 = slab_crossings(scene, rp.specular_point, rx, skip);
                if (leg1.size() + leg2.size() > max_t)
                    return;
                TracedPath p;
                p.length = rp.length;
                append_transmissions(p.interactions, leg1.size());
                p.interactions.push_back(Interaction::reflection);
                append_transmissions(p.interactions, leg2.size());
                p.crossed_slabs = leg1;
                p.crossed_slabs.insert(p.crossed_slabs.end(), leg2.begin(), leg2.end());
                p.reflector_slab = slab;
                p.incidence_angle = std::acos(std::min(1.0, std::abs(d_tx) / (rp.specular_point - anchor).norm()));
                paths.push_back(std::move(p));
            };

            for (std::size_t s = 0; s < scene.surfaces.size(); ++s)
            {
                const Surface &surf = scene.surfaces[s];
                Point3 on_plane = Point3::Zero();
                on_plane[surf.axis] = surf.coord;
                reflect_off(ReflectorPlane::through(on_plane, surf.normal()), s, surf.slab, &surf);
            }
            if (scene.ground_slab)
                reflect_off(ReflectorPlane::through(Point3(0.0, 0.0, scene.ground_z), Eigen::Vector3d::UnitZ()), SIZE_MAX,
                            *scene.ground_slab, nullptr);
        }

        if (scene.limits.max_diffractions >= 1)
        {
            for (std::size_t e = 0; e < scene.edges.size(); ++e)
            {
                const WindowEdgeFeature &f = scene.edges[e];
                DiffractionSolution sol;
                try
                {
                    sol = diffraction_point(anchor, rx, f.edge);
                }
                catch (const std::invalid_argument &)
                {
                    continue;
                }
                const auto leg1 = slab_crossings(scene, anchor, sol.q, f.surface);
                const auto leg2 = slab_crossings(scene, sol.q, rx, f.surface);
                if (leg1.size() + leg2.size() > max_t)
                    continue;
                TracedPath p;
                p.length = sol.path_length;
                append_transmissions(p.interactions, leg1.size());
                p.interactions.push_back(Interaction::diffraction);
                append_transmissions(p.interactions, leg2.size());
                p.crossed_slabs = leg1;
                p.crossed_slabs.insert(p.crossed_slabs.end(), leg2.begin(), leg2.end());
                p.edge_id = static_cast<int>(e);
                paths.push_back(std::move(p));
            }
        }
        return paths;
    }

    Pdp evaluate_paths(const std::vector<TracedPath> &paths, const SceneConfig &scene, std::size_t anchor_id,
                       const Point3 &rx, const Band &band)
    {
        band.validate();
        const double f = band.center_frequency;
        std::vector<double> slab_loss(scene.slabs.size());
        for (std::size_t i = 0; i < scene.slabs.size(); ++i)
            slab_loss[i] = transmission_loss_db(scene.slabs[i], f);
        const double diffraction_excess = scene.diffraction.excess_db(f);
        const double noise = noise_floor_dbm(band.bandwidth, scene.noise_temperature_k);

        Pdp pdp;
        pdp.receiver = rx;
        pdp.anchor_id = anchor_id;
        for (const auto &p : paths)
        {
            double loss = free_space_path_loss_db(p.length, f);
            for (auto s : p.crossed_slabs)
                loss += slab_loss[s];
            if (p.reflector_slab)
                loss += reflection_loss_db(scene.slabs[*p.reflector_slab], f, p.incidence_angle, scene.polarization);
            if (p.edge_id >= 0)
                loss += diffraction_excess;

            Mpc m;
            m.interactions = p.interactions;
            m.path_length = p.length;
            m.tof = time_of_flight(p.length);
            m.rx_power = band.tx_power_dbm - loss + band.rx_gain_db;
            m.snr = m.rx_power - noise;
            m.anchor_id = anchor_id;
            m.group = classify_mpc(m.interactions);
            m.edge_id = p.edge_id;
            if (!std::isfinite(m.snr) || m.snr < scene.min_snr_db)
                continue;
            pdp.mpcs.push_back(std::move(m));
        }
        sort_by_tof(pdp);
        return pdp;
    }

    Pdp enumerate_mpcs(const SceneConfig &scene, std::size_t anchor_id, const Point3 &rx, const Band &band)
    {
        if (anchor_id >= scene.anchors.size())
            throw std::invalid_argument("enumerate_mpcs: anchor id out of range");
        return evaluate_paths(trace_paths(scene, scene.anchors[anchor_id], rx), scene, anchor_id, rx, band);
    }

    Pdp enumerate_mpcs(const SceneConfig &scene, std::size_t anchor_id, const Point3 &rx, double frequency_hz)
    {
        return enumerate_mpcs(scene, anchor_id, rx, scene.bands.band_for(frequency_hz));
    }
}
