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

#ifndef DIFFPOS_GEOMETRY_HPP
#define DIFFPOS_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <vector>

namespace diffpos
{
    using Point3 = Eigen::Vector3d;

    // Horizontal diffracting edge described in its own frame: the edge runs along the local
    // x axis on the line {y = 0, z = z_e} between abscissae x1 and x2. `frame` maps world
    // coordinates into that frame. `w` is the vertical height of the window the edge bounds.
    struct WindowEdge
    {
        double x1 = 0.0;
        double x2 = 1.0;
        double z_e = 0.0;
        double w = 1.0;
        Eigen::Isometry3d frame = Eigen::Isometry3d::Identity();

        // Builds the edge from two world endpoints at a common height. The local frame is a
        // rotation about the world z axis plus a horizontal translation, so local z equals
        // world z and z_e equals the endpoint height.
        static WindowEdge from_world(const Point3 &p1, const Point3 &p2, double window_height);

        Point3 to_local(const Point3 &world) const { return frame * world; }
        Point3 to_world(const Point3 &local) const { return frame.inverse() * local; }

        // Edge with every coordinate (including z_e) expressed after `motion` is applied to
        // the world. Used to check frame invariance.
        WindowEdge transformed(const Eigen::Isometry3d &motion) const;

        void validate() const;
    };

    // Plane n.p = offset with an optional convex or concave facet polygon lying in the plane.
    struct ReflectorPlane
    {
        Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
        double offset = 0.0;
        std::vector<Point3> facet;

        static ReflectorPlane through(const Point3 &point, const Eigen::Vector3d &normal);

        double signed_distance(const Point3 &p) const { return normal.dot(p) - offset; }
        bool facet_contains(const Point3 &p) const;
        void validate() const;
    };

    struct DiffractionSolution
    {
        double lambda = 0.0;      // weight of endpoint x1
        Point3 q;                 // diffraction point, world coordinates
        double path_length = 0.0; // tx -> q -> rx
        bool endpoint = false;    // minimum lies on a segment end (corner diffraction)
        bool fallback = false;    // quadratic was degenerate, solved numerically
    };

    struct ReflectionPath
    {
        double length = 0.0;
        Point3 specular_point;
        bool valid = true;
    };

    double euclidean_distance(const Point3 &a, const Point3 &b);

    Point3 reflect_point(const Point3 &p, const ReflectorPlane &plane);

    // Image-method reflection. Throws std::invalid_argument when tx and rx are not strictly on
    // the same side of the plane.
    ReflectionPath reflection_path_length(const Point3 &tx, const Point3 &rx, const ReflectorPlane &plane);

    // Two-leg length tx -> (x2 + lambda (x1 - x2), 0, z_e) -> rx for points already in the
    // edge-local frame.
    double two_leg_length(const Point3 &tx_local, const Point3 &rx_local, double x1, double x2, double z_e, double lambda);

    // Fermat point on a finite horizontal edge. The stationarity condition is the quadratic
    // a lambda^2 + b lambda + c = 0; both roots and both segment ends are scored by the
    // two-leg length and the shortest wins. Degenerate quadratics fall back to a bracketed
    // 1D minimisation over [0, 1].
    DiffractionSolution diffraction_point(const Point3 &tx, const Point3 &rx, const WindowEdge &edge);

    double exact_diffraction_path_length(const Point3 &tx, const Point3 &rx, const WindowEdge &edge);

    // Diffraction point under the receiver-relative edge height z_e = z_n + w / 2, where z_n is
    // the receiver's local height. The edge's own z_e is ignored.
    DiffractionSolution approx_diffraction_point(const Point3 &tx, const Point3 &rx_candidate, const WindowEdge &edge, double w);

    // Model path length p(alpha) used by the positioning solvers.
    double approx_diffraction_path_length(const Point3 &tx, const Point3 &rx_candidate, const WindowEdge &edge, double w);
}

#endif
