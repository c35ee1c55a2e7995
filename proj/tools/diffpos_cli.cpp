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
#include "diffpos/dataset.hpp"
#include "diffpos/experiments.hpp"
#include "diffpos/fap.hpp"
#include "diffpos/tracer.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace diffpos;

namespace
{
    ProjectConfig load_or_default(const std::string &path)
    {
        return path.empty() ? ProjectConfig{} : load_config(path);
    }

    void print_report(const SweepReport &report)
    {
        std::printf("%10s %5s %8s %8s %8s %8s %10s %10s %10s\n", "f [GHz]", "band", "MPC1 %", "MPC2 %", "MPC3 %",
                    "MPC4 %", "D-NLS med", "LLS med", "PEB med");
        for (const auto &fr : report.frequencies)
        {
            auto med = [](const std::vector<double> &v) { return v.empty() ? 0.0 : quartiles(v).median; };
            std::printf("%10.3f %5s %8.2f %8.2f %8.2f %8.2f %10.3f %10.3f %10.3f\n", fr.frequency_hz / 1e9,
                        fr.band.c_str(), fr.p_fap[0], fr.p_fap[1], fr.p_fap[2], fr.p_fap[3], med(fr.dnls_errors),
                        med(fr.lls_errors), med(fr.peb));
        }
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"diffpos: diffraction-aided NLoS positioning simulator"};
    app.require_subcommand(1);

    // scene
    std::string scene_config, scene_out;
    bool full_scale = false;
    auto *scene = app.add_subcommand("scene", "Write a scenario config (defaults, or a normalised copy of --config)");
    scene->add_option("-c,--config", scene_config, "Config file to start from")->check(CLI::ExistingFile);
    scene->add_option("-o,--out", scene_out, "Output path (stdout when omitted)");
    scene->add_flag("--full-scale", full_scale, "Use the 0.5 m / floors 3-7 receiver grid");

    // sweep
    std::string sweep_config, sweep_out;
    std::optional<std::uint64_t> seed;
    std::optional<double> t_fap;
    std::optional<int> trials;
    std::optional<unsigned> threads;
    std::vector<double> freqs;
    bool noiseless = false;
    auto *sweep = app.add_subcommand("sweep", "Run the frequency sweep and write CSV reports");
    sweep->add_option("-c,--config", sweep_config, "Config file")->check(CLI::ExistingFile);
    sweep->add_option("-o,--out", sweep_out, "Output directory (overrides sweep.output_dir)");
    sweep->add_option("-s,--seed", seed, "RNG seed");
    sweep->add_option("--t-fap", t_fap, "FAP threshold below the strongest path, dB");
    sweep->add_option("-n,--trials", trials, "Noisy range draws per receiver")->check(CLI::PositiveNumber);
    sweep->add_option("-j,--threads", threads, "Worker threads (0: all cores)");
    sweep->add_option("-f,--frequencies", freqs, "Carrier frequencies in Hz, ascending");
    sweep->add_flag("--noiseless", noiseless, "Use FAP path lengths as ranges");

    // ingest
    std::string ingest_path, ingest_config, ingest_out;
    double ingest_freq = 3.5e9;
    double ingest_t_fap = 20.0;
    auto *ingest = app.add_subcommand("ingest", "Load an MPC dataset (JSON lines) and summarise its FAPs");
    ingest->add_option("dataset", ingest_path, "Dataset file")->required()->check(CLI::ExistingFile);
    ingest->add_option("-c,--config", ingest_config, "Config file (radio parameters)")->check(CLI::ExistingFile);
    ingest->add_option("--frequency", ingest_freq, "Carrier frequency of the dataset, Hz");
    ingest->add_option("--t-fap", ingest_t_fap, "FAP threshold, dB");
    ingest->add_option("-o,--out", ingest_out, "Directory for fap.csv and p_fap.csv");

    // report
    std::string report_in, report_out;
    auto *report = app.add_subcommand("report", "Re-read sweep CSVs, print a summary and optionally re-export");
    report->add_option("-i,--in", report_in, "Directory written by `sweep`")->required()->check(CLI::ExistingDirectory);
    report->add_option("-o,--out", report_out, "Directory to re-export into");

    // export-dataset
    std::string export_config, export_out;
    double export_freq = 3.5e9;
    std::size_t export_limit = 0;
    auto *exp = app.add_subcommand("export-dataset", "Trace the scenario at one frequency and write its MPCs");
    exp->add_option("-c,--config", export_config, "Config file")->check(CLI::ExistingFile);
    exp->add_option("--frequency", export_freq, "Carrier frequency, Hz");
    exp->add_option("--max-receivers", export_limit, "Only the first N receivers (0: all)");
    exp->add_option("-o,--out", export_out, "Output path")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*scene)
        {
            ProjectConfig cfg = load_or_default(scene_config);
            if (full_scale)
            {
                const auto anchors = cfg.layout.anchors;
                cfg.layout = BuildingLayout::full_scale();
                cfg.layout.anchors = anchors;
            }
            const SceneConfig built = cfg.build_scene();
            if (scene_out.empty())
                std::cout << dump_config(cfg);
            else
                save_config(scene_out, cfg);
            std::cerr << built.surfaces.size() << " surfaces, " << built.edges.size() << " window edges, "
                      << built.anchors.size() << " anchors, " << built.receivers.size() << " receivers\n";
        }
        else if (*sweep)
        {
            ProjectConfig cfg = load_or_default(sweep_config);
            if (seed)
                cfg.seed = *seed;
            if (t_fap)
                cfg.t_fap_db = *t_fap;
            if (trials)
                cfg.trials = *trials;
            if (threads)
                cfg.threads = *threads;
            if (!freqs.empty())
                cfg.frequencies_hz = freqs;
            if (noiseless)
                cfg.noiseless = true;
            if (!sweep_out.empty())
                cfg.output_dir = sweep_out;
            const SweepConfig sc = cfg.sweep_config();
            const auto t0 = std::chrono::steady_clock::now();
            const SweepReport rep = run_sweep(sc);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            export_report(rep, sc.output_dir);
            print_report(rep);
            std::cerr << sc.scene.receivers.size() << " receivers, " << sc.frequencies_hz.size() << " frequencies in "
                      << secs << " s; CSV written to " << sc.output_dir.string() << "\n";
        }
        else if (*ingest)
        {
            const ProjectConfig cfg = load_or_default(ingest_config);
            Band band = cfg.bands.band_for(ingest_freq);
            const IngestResult res = ingest_dataset(fs::path(ingest_path), band, cfg.noise_temperature_k);
            for (const auto &d : res.rejected)
                std::cerr << ingest_path << ":" << d.line << ": rejected: " << d.message << "\n";

            std::map<std::size_t, std::vector<MpcGroup>> by_anchor;
            std::ofstream fap_csv;
            if (!ingest_out.empty())
            {
                fs::create_directories(ingest_out);
                fap_csv.open(fs::path(ingest_out) / "fap.csv");
                if (!fap_csv)
                    throw std::runtime_error("cannot write to '" + ingest_out + "'");
                fap_csv << "anchor_id,rx_id,group,path_length_m,tof_s,snr_db\n";
                fap_csv.precision(17);
            }
            for (const auto &[key, pdp] : res.profiles)
            {
                const Pdp top = truncate_top_k(pdp, cfg.top_k);
                const FapSelection sel = select_fap(top, ingest_t_fap);
                by_anchor[key.first].push_back(sel.chosen.group);
                if (fap_csv.is_open())
                    fap_csv << key.first << ',' << key.second << ',' << group_name(sel.chosen.group) << ','
                            << sel.chosen.path_length << ',' << sel.chosen.tof << ',' << sel.chosen.snr << '\n';
            }
            std::vector<std::vector<MpcGroup>> groups;
            for (auto &[a, g] : by_anchor)
                groups.push_back(std::move(g));
            std::cout << res.records.size() << " records, " << res.rejected.size() << " rejected, "
                      << res.profiles.size() << " profiles\n";
            if (!groups.empty())
            {
                const PFapStats st = p_fap_stats(groups);
                std::printf("P_FAP: MPC1 %.2f %%  MPC2 %.2f %%  MPC3 %.2f %%  MPC4 %.2f %%\n", st.percent[0],
                            st.percent[1], st.percent[2], st.percent[3]);
                if (fap_csv.is_open())
                {
                    std::ofstream p(fs::path(ingest_out) / "p_fap.csv");
                    p.precision(17);
                    p << "mpc1_pct,mpc2_pct,mpc3_pct,mpc4_pct,links\n"
                      << st.percent[0] << ',' << st.percent[1] << ',' << st.percent[2] << ',' << st.percent[3] << ','
                      << st.total << '\n';
                }
            }
            return res.rejected.empty() ? 0 : 2;
        }
        else if (*report)
        {
            const SweepReport rep = read_report(report_in);
            print_report(rep);
            if (!report_out.empty())
                export_report(rep, report_out);
        }
        else if (*exp)
        {
            const ProjectConfig cfg = load_or_default(export_config);
            const SceneConfig sc = cfg.build_scene();
            const Band band = sc.bands.band_for(export_freq);
            const std::size_t n = export_limit ? std::min(export_limit, sc.receivers.size()) : sc.receivers.size();
            std::vector<DatasetRecord> records;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t a = 0; a < sc.anchors.size(); ++a)
                {
                    const auto recs = records_from_pdp(enumerate_mpcs(sc, a, sc.receivers[r], band), r);
                    records.insert(records.end(), recs.begin(), recs.end());
                }
            export_dataset(fs::path(export_out), records);
            std::cerr << records.size() << " records written to " << export_out << "\n";
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "diffpos: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
