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
#include "diffpos/error.hpp"
#include "diffpos/experiments.hpp"
#include "diffpos/fap.hpp"
#include "diffpos/geometry.hpp"
#include "diffpos/materials.hpp"
#include "diffpos/positioning.hpp"
#include "diffpos/tracer.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace diffpos;

namespace
{
    MeasurementSet measurement_set(const std::vector<Point3> &anchors, const std::vector<double> &ranges,
                                   const std::vector<WindowEdge> &edges, double window_height)
    {
        if (anchors.size() != ranges.size() || (!edges.empty() && edges.size() != anchors.size()))
            throw std::invalid_argument("anchors, ranges and edges must have matching lengths");
        MeasurementSet m;
        m.window_height = window_height;
        for (std::size_t j = 0; j < anchors.size(); ++j)
            m.entries.push_back({anchors[j], ranges[j], 1.0, edges.empty() ? WindowEdge{} : edges[j]});
        return m;
    }

    py::dict report_dict(const FrequencyReport &fr)
    {
        py::dict d;
        d["frequency_hz"] = fr.frequency_hz;
        d["band"] = fr.band;
        d["receivers"] = fr.receivers;
        d["p_fap"] = fr.p_fap;
        d["fap_counts"] = fr.fap_counts;
        d["undetected_links"] = fr.undetected_links;
        d["dnls_errors"] = fr.dnls_errors;
        d["lls_errors"] = fr.lls_errors;
        d["peb"] = fr.peb;
        d["dnls_excluded"] = fr.dnls_excluded;
        d["lls_excluded"] = fr.lls_excluded;
        d["peb_excluded"] = fr.peb_excluded;
        return d;
    }
}

PYBIND11_MODULE(_core, m)
{
    m.doc() = "diffpos core bindings";

    py::register_exception<singular_geometry_error>(m, "SingularGeometryError", PyExc_ArithmeticError);
    py::register_exception<no_detection_error>(m, "NoDetectionError", PyExc_LookupError);
    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);

    py::class_<WindowEdge>(m, "WindowEdge")
        .def_static("from_world", &WindowEdge::from_world, py::arg("p1"), py::arg("p2"), py::arg("window_height"))
        .def_readonly("x1", &WindowEdge::x1)
        .def_readonly("x2", &WindowEdge::x2)
        .def_readonly("z_e", &WindowEdge::z_e)
        .def_readonly("w", &WindowEdge::w);

    py::class_<DiffractionSolution>(m, "DiffractionSolution")
        .def_readonly("lam", &DiffractionSolution::lambda)
        .def_readonly("q", &DiffractionSolution::q)
        .def_readonly("path_length", &DiffractionSolution::path_length)
        .def_readonly("endpoint", &DiffractionSolution::endpoint);

    m.def("diffraction_point", &diffraction_point, py::arg("tx"), py::arg("rx"), py::arg("edge"));
    m.def("exact_diffraction_path_length", &exact_diffraction_path_length, py::arg("tx"), py::arg("rx"), py::arg("edge"));
    m.def("approx_diffraction_path_length", &approx_diffraction_path_length, py::arg("tx"), py::arg("rx"), py::arg("edge"),
          py::arg("w"));

    py::class_<Material>(m, "Material")
        .def(py::init([](std::string name, double a, double b, double c, double d) { return Material{name, a, b, c, d}; }),
             py::arg("name"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
        .def_readonly("name", &Material::name)
        .def_readonly("a", &Material::a)
        .def_readonly("b", &Material::b)
        .def_readonly("c", &Material::c)
        .def_readonly("d", &Material::d);
    m.def("concrete", &concrete);
    m.def("plasterboard", &plasterboard);
    m.def("transmission_loss_db", py::overload_cast<const Material &, double, double>(&transmission_loss_db), py::arg("material"),
          py::arg("thickness_m"), py::arg("frequency_hz"));
    m.def("drywall_loss_db", [](double f) { return transmission_loss_db(drywall_slab(), f); }, py::arg("frequency_hz"));
    m.def("free_space_path_loss_db", &free_space_path_loss_db, py::arg("distance_m"), py::arg("frequency_hz"));

    m.def("classify_mpc", [](const std::string &path) { return std::string(group_name(classify_mpc(path))); }, py::arg("path"));
    m.def("noise_floor_dbm", &noise_floor_dbm, py::arg("bandwidth_hz"), py::arg("noise_temperature_k") = 290.0);

    m.def("mean_squared_bandwidth", py::overload_cast<double>(&mean_squared_bandwidth), py::arg("bandwidth_hz"));
    m.def("ranging_crlb_std_seconds", &ranging_crlb_std_seconds, py::arg("beta_sq"), py::arg("snr_linear"));
    m.def(
        "select_fap",
        [](const std::vector<std::pair<double, double>> &paths, double t_fap) {
            Pdp pdp;
            for (const auto &[length, snr] : paths)
            {
                Mpc mpc;
                mpc.path_length = length;
                mpc.tof = time_of_flight(length);
                mpc.snr = snr;
                pdp.mpcs.push_back(mpc);
            }
            sort_by_tof(pdp);
            return select_fap(pdp, t_fap).chosen.path_length;
        },
        py::arg("paths"), py::arg("t_fap_db"), "Path length of the first arriving path among (length_m, snr_db) pairs.");

    m.def(
        "lls_solve",
        [](const std::vector<Point3> &anchors, const std::vector<double> &ranges) {
            return lls_solve(measurement_set(anchors, ranges, {}, 0.0)).position;
        },
        py::arg("anchors"), py::arg("ranges"));
    m.def(
        "dnls_solve",
        [](const std::vector<Point3> &anchors, const std::vector<double> &ranges, const std::vector<WindowEdge> &edges,
           double window_height, const Point3 &init) {
            const auto est = dnls_solve(measurement_set(anchors, ranges, edges, window_height), init);
            return py::make_tuple(est.position, est.converged, est.iterations);
        },
        py::arg("anchors"), py::arg("ranges"), py::arg("edges"), py::arg("window_height"), py::arg("init"));
    m.def(
        "diffraction_model",
        [](const std::vector<Point3> &anchors, const std::vector<WindowEdge> &edges, double window_height, const Point3 &alpha) {
            return diffraction_model(alpha, measurement_set(anchors, std::vector<double>(anchors.size(), 0.0), edges, window_height));
        },
        py::arg("anchors"), py::arg("edges"), py::arg("window_height"), py::arg("alpha"));
    m.def(
        "peb",
        [](const std::vector<Point3> &anchors, const std::vector<WindowEdge> &edges, double window_height, const Point3 &alpha,
           const std::vector<double> &snr_linear, double beta_sq) {
            return peb(alpha, measurement_set(anchors, std::vector<double>(anchors.size(), 0.0), edges, window_height), snr_linear,
                       beta_sq)
                .peb;
        },
        py::arg("anchors"), py::arg("edges"), py::arg("window_height"), py::arg("alpha"), py::arg("snr_linear"), py::arg("beta_sq"));

    m.def("default_config", [] { return dump_config(ProjectConfig{}); }, "Default configuration as JSON text.");
    m.def("receiver_count", [](const std::string &config) { return parse_config(config).build_scene().receivers.size(); },
          py::arg("config"));
    m.def(
        "run_sweep",
        [](const std::string &config, std::optional<std::filesystem::path> output_dir) {
            const SweepConfig cfg = parse_config(config).sweep_config();
            SweepReport rep;
            {
                py::gil_scoped_release release;
                rep = run_sweep(cfg);
            }
            if (output_dir)
                export_report(rep, *output_dir);
            py::list out;
            for (const auto &fr : rep.frequencies)
                out.append(report_dict(fr));
            return out;
        },
        py::arg("config"), py::arg("output_dir") = py::none(),
        "Runs a sweep from JSON config text; returns one dict per frequency and optionally writes the CSV report.");
}
