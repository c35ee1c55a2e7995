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

#include "diffpos/experiments.hpp"
#include "diffpos/error.hpp"
#include "diffpos/tracer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace diffpos
{
    std::vector<double> default_frequency_ladder()
    {
        return {0.7e9, 3.5e9, 5.8e9, 10e9, 15e9, 28e9, 39e9};
    }

    void SweepConfig::validate() const
    {
        if (frequencies_hz.empty())
            throw std::invalid_argument("SweepConfig: frequency ladder is empty");
        for (std::size_t i = 0; i < frequencies_hz.size(); ++i)
        {
            if (!(frequencies_hz[i] > 0.0) || !std::isfinite(frequencies_hz[i]))
                throw std::invalid_argument("SweepConfig: frequencies must be positive");
            if (i > 0 && !(frequencies_hz[i] > frequencies_hz[i - 1]))
                throw std::invalid_argument("SweepConfig: frequency ladder must be strictly increasing");
        }
        if (trials < 1)
            throw std::invalid_argument("SweepConfig: trials must be at least 1");
        if (!std::isfinite(t_fap_db) || t_fap_db < 0.0)
            throw std::invalid_argument("SweepConfig: t_fap must be non-negative");
        if (max_reassociations < 0)
            throw std::invalid_argument("SweepConfig: max_reassociations must be non-negative");
        scene.validate();
    }

    Quartiles quartiles(std::vector<double> s)
    {
        Quartiles q;
        q.count = s.size();
        if (s.empty())
            return q;
        std::sort(s.begin(), s.end());
        auto at = [&](double p) {
            const double h = p * static_cast<double>(s.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(h));
            const auto hi = std::min(lo + 1, s.size() - 1);
            return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
        };
        q.min = s.front();
        q.q1 = at(0.25);
        q.median = at(0.5);
        q.q3 = at(0.75);
        q.max = s.back();
        return q;
    }

    namespace
    {
        std::size_t slot(MpcGroup g)
        {
            return static_cast<std::size_t>(g) - 1;
        }
    }

    PFapStats p_fap_stats(const std::vector<std::vector<MpcGroup>> &groups)
    {
        PFapStats out;
        for (const auto &per_tx : groups)
            for (auto g : per_tx)
            {
                ++out.counts[slot(g)];
                ++out.total;
            }
        if (out.total == 0)
            throw std::invalid_argument("p_fap_stats: no receivers");
        for (std::size_t g = 0; g < 4; ++g)
            out.percent[g] = 100.0 * static_cast<double>(out.counts[g]) / static_cast<double>(out.total);
        return out;
    }

    std::size_t associate_column(const SceneConfig &scene, const Point3 &anchor, const Point3 &alpha)
    {
        if (scene.columns.empty())
            throw std::invalid_argument("associate_column: scene has no windows");
        std::optional<std::size_t> best;
        double best_len = std::numeric_limits<double>::infinity();
        auto scan = [&](bool facing_only) {
            for (std::size_t c = 0; c < scene.columns.size(); ++c)
            {
                const auto &col = scene.columns[c];
                const Surface &s = scene.surfaces[col.surface];
                if (facing_only && !(s.outward * (anchor[s.axis] - s.coord) > 0.0))
                    continue;
                double len = 0.0;
                try
                {
                    len = approx_diffraction_path_length(anchor, alpha, col.edge, scene.window_height);
                }
                catch (const std::exception &)
                {
                    continue;
                }
                if (len < best_len)
                {
                    best_len = len;
                    best = c;
                }
            }
        };
        scan(true);
        if (!best)
            scan(false);
        if (!best)
            throw singular_geometry_error("associate_column: no usable window column");
        return *best;
    }

    namespace
    {
        std::uint64_t splitmix(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ull;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
            return x ^ (x >> 31);
        }

        std::uint64_t derive_seed(std::uint64_t seed, std::size_t f, std::size_t r, std::size_t a, std::size_t t)
        {
            std::uint64_t s = splitmix(seed);
            for (std::uint64_t v : {std::uint64_t(f), std::uint64_t(r), std::uint64_t(a), std::uint64_t(t)})
                s = splitmix(s ^ v);
            return s;
        }

        constexpr double nan = std::numeric_limits<double>::quiet_NaN();

        struct Cell
        {
            std::vector<std::optional<Mpc>> fap; // per anchor
            std::vector<double> dnls, lls;        // per trial, NaN when excluded
            std::size_t dnls_not_converged = 0;
            double peb = nan;
        };

        PositionEstimate solve_dnls(const SweepConfig &cfg, MeasurementSet meas)
        {
            const SceneConfig &scene = cfg.scene;
            Point3 x = initial_guess(meas, scene.bounds);
            std::vector<std::size_t> cols(meas.size());
            for (std::size_t j = 0; j < meas.size(); ++j)
            {
                cols[j] = associate_column(scene, meas.entries[j].anchor, x);
                meas.entries[j].edge = scene.columns[cols[j]].edge;
            }
            PositionEstimate est = dnls_solve(meas, x, cfg.dnls);
            for (int round = 0; round < cfg.max_reassociations; ++round)
            {
                bool changed = false;
                for (std::size_t j = 0; j < meas.size(); ++j)
                {
                    const std::size_t c = associate_column(scene, meas.entries[j].anchor, est.position);
                    if (c != cols[j])
                    {
                        cols[j] = c;
                        meas.entries[j].edge = scene.columns[c].edge;
                        changed = true;
                    }
                }
                if (!changed)
                    break;
                est = dnls_solve(meas, est.position, cfg.dnls);
            }
            return est;
        }

        void process_receiver(const SweepConfig &cfg, const std::vector<Band> &bands, const std::vector<double> &beta_sq,
                              std::size_t r, std::vector<std::vector<Cell>> &cells)
        {
            const SceneConfig &scene = cfg.scene;
            const Point3 &rx = scene.receivers[r];
            const std::size_t n_a = scene.anchors.size();
            const auto trials = static_cast<std::size_t>(cfg.trials);

            std::vector<std::vector<TracedPath>> traced(n_a);
            for (std::size_t j = 0; j < n_a; ++j)
                traced[j] = trace_paths(scene, scene.anchors[j], rx);

            for (std::size_t f = 0; f < bands.size(); ++f)
            {
                Cell &cell = cells[f][r];
                cell.fap.assign(n_a, std::nullopt);
                cell.dnls.assign(trials, nan);
                cell.lls.assign(trials, nan);

                MeasurementSet bound_geometry;
                bound_geometry.window_height = scene.window_height;
                std::vector<double> bound_snr;
                for (std::size_t j = 0; j < n_a; ++j)
                {
                    const Pdp pdp = truncate_top_k(evaluate_paths(traced[j], scene, j, rx, bands[f]), scene.top_k);
                    if (pdp.mpcs.empty())
                        continue;
                    cell.fap[j] = select_fap(pdp, cfg.t_fap_db).chosen;
                    for (const auto &m : pdp.mpcs)
                        if (m.group == MpcGroup::mpc3 && m.edge_id >= 0)
                        {
                            const auto &feat = scene.edges[static_cast<std::size_t>(m.edge_id)];
                            bound_geometry.entries.push_back({scene.anchors[j], m.path_length, 1.0,
                                                              scene.columns[feat.column].edge});
                            bound_snr.push_back(db_to_linear(m.snr));
                            break;
                        }
                }

                if (bound_geometry.size() >= 3)
                {
                    try
                    {
                        const FimResult fr = peb(rx, bound_geometry, bound_snr, beta_sq[f]);
                        if (fr.invertible && std::isfinite(fr.peb))
                            cell.peb = fr.peb;
                    }
                    catch (const singular_geometry_error &)
                    {
                    }
                }

                const bool all_detected =
                    n_a >= 4 && std::all_of(cell.fap.begin(), cell.fap.end(), [](const auto &m) { return m.has_value(); });
                if (!all_detected)
                    continue;

                for (std::size_t t = 0; t < trials; ++t)
                {
                    MeasurementSet meas;
                    meas.window_height = scene.window_height;
                    for (std::size_t j = 0; j < n_a; ++j)
                    {
                        FapSelection sel;
                        sel.chosen = *cell.fap[j];
                        const RangeMeasurement rm = cfg.noiseless
                                                        ? noiseless_measurement(sel, beta_sq[f])
                                                        : synthesize_measurement(sel, beta_sq[f], derive_seed(cfg.seed, f, r, j, t));
                        meas.entries.push_back({scene.anchors[j], rm.range, rm.sigma, scene.columns.front().edge});
                    }

                    try
                    {
                        cell.lls[t] = (lls_solve(meas).position - rx).norm();
                    }
                    catch (const singular_geometry_error &)
                    {
                    }
                    try
                    {
                        const PositionEstimate est = solve_dnls(cfg, meas);
                        cell.dnls[t] = (est.position - rx).norm();
                        if (!est.converged)
                            ++cell.dnls_not_converged;
                    }
                    catch (const singular_geometry_error &)
                    {
                    }
                    catch (const numerical_error &)
                    {
                    }
                }
            }
        }

        void collect(std::vector<double> &dst, std::size_t &excluded, const std::vector<double> &src)
        {
            for (double v : src)
            {
                if (std::isfinite(v))
                    dst.push_back(v);
                else
                    ++excluded;
            }
        }
    }

    SweepReport run_sweep(const SweepConfig &cfg)
    {
        cfg.validate();
        const SceneConfig &scene = cfg.scene;
        if (scene.receivers.empty())
            throw std::invalid_argument("run_sweep: scene has no receivers");
        if (scene.columns.empty())
            throw std::invalid_argument("run_sweep: scene has no window columns");

        const std::size_t n_f = cfg.frequencies_hz.size();
        const std::size_t n_r = scene.receivers.size();
        std::vector<Band> bands;
        std::vector<double> beta_sq;
        for (double f : cfg.frequencies_hz)
        {
            bands.push_back(scene.bands.band_for(f));
            beta_sq.push_back(mean_squared_bandwidth(bands.back()));
        }

        std::vector<std::vector<Cell>> cells(n_f, std::vector<Cell>(n_r));
        unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
        n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_r));

        std::vector<std::exception_ptr> errors(n_threads);
        auto worker = [&](unsigned id) {
            try
            {
                for (std::size_t r = id; r < n_r; r += n_threads)
                    process_receiver(cfg, bands, beta_sq, r, cells);
            }
            catch (...)
            {
                errors[id] = std::current_exception();
            }
        };
        if (n_threads <= 1)
            worker(0);
        else
        {
            std::vector<std::thread> pool;
            for (unsigned id = 0; id < n_threads; ++id)
                pool.emplace_back(worker, id);
            for (auto &t : pool)
                t.join();
        }
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);

        SweepReport report;
        for (std::size_t f = 0; f < n_f; ++f)
        {
            FrequencyReport fr;
            fr.frequency_hz = cfg.frequencies_hz[f];
            fr.band = bands[f].label;
            fr.receivers = n_r;
            fr.trials = static_cast<std::size_t>(cfg.trials);

            std::vector<double> snrs;
            std::size_t links = 0;
            double sum_peb = 0.0, sum_dnls = 0.0;
            std::size_t dnls_in_subset = 0;
            for (std::size_t r = 0; r < n_r; ++r)
            {
                const Cell &c = cells[f][r];
                bool mpc3_only = !c.fap.empty();
                for (const auto &m : c.fap)
                {
                    ++links;
                    if (!m)
                    {
                        ++fr.undetected_links;
                        mpc3_only = false;
                        continue;
                    }
                    ++fr.fap_counts[slot(m->group)];
                    snrs.push_back(m->snr);
                    mpc3_only = mpc3_only && m->group == MpcGroup::mpc3;
                }
                collect(fr.dnls_errors, fr.dnls_excluded, c.dnls);
                collect(fr.lls_errors, fr.lls_excluded, c.lls);
                fr.dnls_not_converged += c.dnls_not_converged;
                if (std::isfinite(c.peb))
                    fr.peb.push_back(c.peb);
                else
                    ++fr.peb_excluded;

                if (mpc3_only && std::isfinite(c.peb))
                {
                    const bool any = std::any_of(c.dnls.begin(), c.dnls.end(), [](double v) { return std::isfinite(v); });
                    if (any)
                    {
                        ++fr.mpc3_only;
                        sum_peb += c.peb * c.peb;
                        for (double v : c.dnls)
                            if (std::isfinite(v))
                            {
                                sum_dnls += v * v;
                                ++dnls_in_subset;
                            }
                    }
                }
            }
            const std::size_t detected = links - fr.undetected_links;
            if (detected > 0)
                for (std::size_t g = 0; g < 4; ++g)
                    fr.p_fap[g] = 100.0 * static_cast<double>(fr.fap_counts[g]) / static_cast<double>(detected);
            fr.fap_snr = quartiles(std::move(snrs));
            if (fr.mpc3_only > 0)
            {
                fr.mpc3_only_rms_peb = std::sqrt(sum_peb / static_cast<double>(fr.mpc3_only));
                fr.mpc3_only_rms_dnls = std::sqrt(sum_dnls / static_cast<double>(dnls_in_subset));
            }
            std::sort(fr.dnls_errors.begin(), fr.dnls_errors.end());
            std::sort(fr.lls_errors.begin(), fr.lls_errors.end());
            std::sort(fr.peb.begin(), fr.peb.end());
            report.frequencies.push_back(std::move(fr));
        }
        return report;
    }

    // ---------------------------------------------------------------------------------------------
    // CSV

    namespace
    {
        const char *const estimator_names[3] = {"dnls", "lls", "peb"};

        std::string fmt(double v)
        {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            return std::string(buf, res.ptr);
        }

        double parse_double(const std::string &s)
        {
            double v = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                throw std::runtime_error("read_report: bad number '" + s + "'");
            return v;
        }

        std::size_t parse_size(const std::string &s)
        {
            std::size_t v = 0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                throw std::runtime_error("read_report: bad count '" + s + "'");
            return v;
        }

        std::ofstream open_out(const std::filesystem::path &p)
        {
            std::ofstream out(p, std::ios::binary);
            if (!out)
                throw std::runtime_error("export_report: cannot write '" + p.string() + "'");
            return out;
        }

        std::vector<std::vector<std::string>> read_rows(const std::filesystem::path &p)
        {
            std::ifstream in(p, std::ios::binary);
            if (!in)
                throw std::runtime_error("read_report: cannot open '" + p.string() + "'");
            std::vector<std::vector<std::string>> rows;
            std::string line;
            bool header = true;
            while (std::getline(in, line))
            {
                if (header)
                {
                    header = false;
                    continue;
                }
                if (line.empty())
                    continue;
                std::vector<std::string> cells;
                std::stringstream ss(line);
                std::string cell;
                while (std::getline(ss, cell, ','))
                    cells.push_back(cell);
                rows.push_back(std::move(cells));
            }
            return rows;
        }

        std::filesystem::path cdf_name(const std::filesystem::path &dir, std::size_t k, std::size_t est)
        {
            return dir / ("cdf_" + std::to_string(k) + "_" + estimator_names[est] + ".csv");
        }

        template <typename Report>
        auto &samples(Report &fr, std::size_t est)
        {
            return est == 0 ? fr.dnls_errors : est == 1 ? fr.lls_errors : fr.peb;
        }
    }

    void export_report(const SweepReport &report, const std::filesystem::path &dir)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec || !std::filesystem::is_directory(dir))
            throw std::runtime_error("export_report: cannot create directory '" + dir.string() + "'");

        auto p_fap = open_out(dir / "p_fap.csv");
        p_fap << "frequency_hz,band,mpc1_pct,mpc2_pct,mpc3_pct,mpc4_pct,mpc1_n,mpc2_n,mpc3_n,mpc4_n,undetected\n";
        auto snr = open_out(dir / "fap_snr.csv");
        snr << "frequency_hz,count,min_db,q1_db,median_db,q3_db,max_db\n";
        auto summary = open_out(dir / "summary.csv");
        summary << "frequency_hz,receivers,trials,dnls_n,dnls_excluded,dnls_not_converged,lls_n,lls_excluded,peb_n,"
                   "peb_excluded,dnls_exclusion_rate,lls_exclusion_rate,peb_exclusion_rate,dnls_median_m,lls_median_m,"
                   "peb_median_m,mpc3_only,mpc3_only_rms_peb_m,mpc3_only_rms_dnls_m\n";

        for (std::size_t k = 0; k < report.frequencies.size(); ++k)
        {
            const FrequencyReport &fr = report.frequencies[k];
            const std::string f = fmt(fr.frequency_hz);
            p_fap << f << ',' << fr.band;
            for (double v : fr.p_fap)
                p_fap << ',' << fmt(v);
            for (auto n : fr.fap_counts)
                p_fap << ',' << n;
            p_fap << ',' << fr.undetected_links << '\n';

            const Quartiles &q = fr.fap_snr;
            snr << f << ',' << q.count << ',' << fmt(q.min) << ',' << fmt(q.q1) << ',' << fmt(q.median) << ','
                << fmt(q.q3) << ',' << fmt(q.max) << '\n';

            const double attempts = static_cast<double>(fr.receivers * fr.trials);
            auto rate = [&](std::size_t n, double of) { return of > 0.0 ? fmt(static_cast<double>(n) / of) : "0"; };
            auto median = [](const std::vector<double> &v) { return v.empty() ? 0.0 : quartiles(v).median; };
            summary << f << ',' << fr.receivers << ',' << fr.trials << ',' << fr.dnls_errors.size() << ','
                    << fr.dnls_excluded << ',' << fr.dnls_not_converged << ',' << fr.lls_errors.size() << ','
                    << fr.lls_excluded << ',' << fr.peb.size() << ',' << fr.peb_excluded << ','
                    << rate(fr.dnls_excluded, attempts) << ',' << rate(fr.lls_excluded, attempts) << ','
                    << rate(fr.peb_excluded, static_cast<double>(fr.receivers)) << ',' << fmt(median(fr.dnls_errors))
                    << ',' << fmt(median(fr.lls_errors)) << ',' << fmt(median(fr.peb)) << ',' << fr.mpc3_only << ','
                    << fmt(fr.mpc3_only_rms_peb) << ',' << fmt(fr.mpc3_only_rms_dnls) << '\n';

            for (std::size_t e = 0; e < 3; ++e)
            {
                const auto &v = samples(fr, e);
                auto out = open_out(cdf_name(dir, k, e));
                out << "frequency_hz,error_m,probability\n";
                for (std::size_t i = 0; i < v.size(); ++i)
                    out << f << ',' << fmt(v[i]) << ','
                        << fmt(static_cast<double>(i + 1) / static_cast<double>(v.size())) << '\n';
            }
        }
        for (auto *s : {&p_fap, &snr, &summary})
        {
            s->flush();
            if (!*s)
                throw std::runtime_error("export_report: write failed");
        }
    }

    SweepReport read_report(const std::filesystem::path &dir)
    {
        const auto p_rows = read_rows(dir / "p_fap.csv");
        const auto s_rows = read_rows(dir / "fap_snr.csv");
        const auto m_rows = read_rows(dir / "summary.csv");
        if (p_rows.size() != s_rows.size() || p_rows.size() != m_rows.size())
            throw std::runtime_error("read_report: CSV files disagree on the number of frequencies");

        SweepReport report;
        for (std::size_t k = 0; k < p_rows.size(); ++k)
        {
            const auto &p = p_rows[k];
            const auto &s = s_rows[k];
            const auto &m = m_rows[k];
            if (p.size() != 11 || s.size() != 7 || m.size() != 19)
                throw std::runtime_error("read_report: wrong column count in row " + std::to_string(k + 2));
            FrequencyReport fr;
            fr.frequency_hz = parse_double(p[0]);
            fr.band = p[1];
            for (std::size_t g = 0; g < 4; ++g)
            {
                fr.p_fap[g] = parse_double(p[2 + g]);
                fr.fap_counts[g] = parse_size(p[6 + g]);
            }
            fr.undetected_links = parse_size(p[10]);

            fr.fap_snr = {parse_size(s[1]), parse_double(s[2]), parse_double(s[3]),
                          parse_double(s[4]), parse_double(s[5]), parse_double(s[6])};

            fr.receivers = parse_size(m[1]);
            fr.trials = parse_size(m[2]);
            fr.dnls_excluded = parse_size(m[4]);
            fr.dnls_not_converged = parse_size(m[5]);
            fr.lls_excluded = parse_size(m[7]);
            fr.peb_excluded = parse_size(m[9]);
            fr.mpc3_only = parse_size(m[16]);
            fr.mpc3_only_rms_peb = parse_double(m[17]);
            fr.mpc3_only_rms_dnls = parse_double(m[18]);

            const std::size_t expected[3] = {parse_size(m[3]), parse_size(m[6]), parse_size(m[8])};
            for (std::size_t e = 0; e < 3; ++e)
            {
                auto &v = samples(fr, e);
                for (const auto &row : read_rows(cdf_name(dir, k, e)))
                {
                    if (row.size() != 3)
                        throw std::runtime_error("read_report: malformed CDF row");
                    v.push_back(parse_double(row[1]));
                }
                if (v.size() != expected[e])
                    throw std::runtime_error("read_report: CDF sample count disagrees with summary.csv");
            }
            report.frequencies.push_back(std::move(fr));
        }
        return report;
    }
}
