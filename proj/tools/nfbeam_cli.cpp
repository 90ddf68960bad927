// SPDX-License-Identifier: Apache-2.0
//
// nfbeam - hierarchical near-field beam training with spatial-chirp codebooks
// Copyright (C) 2026 nfbeam contributors
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

// Command line front end: plan, codebook, pattern, sweep, layers, overhead, enhance, overlap.
// Exit codes: 0 success, 2 configuration error, 1 runtime error.

#include "nfbeam/codebook_io.hpp"
#include "nfbeam/harness.hpp"
#include "nfbeam/pattern.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

using namespace nfbeam;

namespace
{
    // Flags that map onto config keys; empty means "not given"
    struct Overrides
    {
        std::string config_path;
        bool full = false;
        std::map<std::string, std::string> values;

        void add(CLI::App *app, const std::string &flag, const std::string &key, const std::string &help)
        {
            app->add_option(flag, values[key], help + " (" + key + ")");
        }

        ExperimentConfig resolve() const
        {
            KeyValues kv;
            if (!config_path.empty())
                kv = load_key_values(config_path);
            for (const auto &e : values)
                if (!e.second.empty())
                    kv[e.first] = e.second;
            return config_from_key_values(kv, full ? ExperimentConfig::full() : ExperimentConfig::desk());
        }
    };

    void add_common(CLI::App *app, Overrides &o)
    {
        app->add_option("--config", o.config_path, "Key-value configuration file")->check(CLI::ExistingFile);
        app->add_flag("--full", o.full, "Start from the full-scale preset (N = 512, 2000 trials)");
        o.add(app, "--n-bs", "array.n_bs", "Number of antennas");
        o.add(app, "--fc", "array.f_c", "Carrier frequency [Hz]");
        o.add(app, "--r-min", "plan.r_min", "Planning distance [m] or 'fresnel'");
        o.add(app, "--seed", "sweep.seed", "Master seed");
        o.add(app, "--workers", "run.workers", "Worker threads");
        o.add(app, "--iterations", "enhance.iterations", "Enhancement iterations");
        o.add(app, "--weighting", "enhance.weighting", "uniform|side");
        o.add(app, "--support", "enhance.support", "slope_width|power_consistent");
    }

    void add_experiment(CLI::App *app, Overrides &o)
    {
        o.add(app, "--trials", "sweep.trials", "Trials per axis point");
        o.add(app, "--snr", "sweep.snr_db", "SNR [dB] when the axis is not SNR");
        o.add(app, "--schemes", "sweep.schemes", "Comma separated scheme names");
        o.add(app, "--r-lo", "channel.r_lo", "Lower bound of the distance draw [m]");
        o.add(app, "--r-hi", "channel.r_hi", "Upper bound of the distance draw [m]");
        o.add(app, "--nlos", "channel.nlos", "Number of NLoS paths");
        o.add(app, "--rate", "rate.normalization", "per_antenna|array_gain");
        o.add(app, "--out", "output.path", "Output file (stdout if empty)");
        o.add(app, "--format", "output.format", "csv|json");
    }

    void write_text(const std::string &path, const std::string &text)
    {
        if (path.empty() || path == "-")
        {
            std::cout << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        f << text;
        if (!f)
            throw std::runtime_error("write failed for '" + path + "'");
    }

    void write_meta(const ExperimentConfig &cfg, const std::string &command)
    {
        if (cfg.output_path.empty() || cfg.output_path == "-")
            return;
        nlohmann::json m = {{"command", command}, {"rng", rng_name}, {"seed", cfg.seed}, {"trials", cfg.trials},
                            {"n_bs", cfg.array.n_bs}, {"f_c", cfg.array.f_c}, {"axis", to_string(cfg.axis)},
                            {"rate", to_string(cfg.rate)}};
        write_text(cfg.output_path + ".meta.json", m.dump(2) + "\n");
    }

    void emit_table(const ResultTable &t, const ExperimentConfig &cfg)
    {
        if (cfg.output_path.empty() || cfg.output_path == "-")
            std::cout << (cfg.format == "json" ? to_json(t) : to_csv(t));
        else
            export_table(t, cfg.output_path, cfg.format);
    }

    double plan_distance(const ExperimentConfig &cfg)
    {
        return cfg.r_min_plan > 0.0 ? cfg.r_min_plan : fresnel_min_distance(cfg.array);
    }

    HierarchicalCodebook build_book(const ExperimentConfig &cfg, bool enhance)
    {
        const HierarchicalCodebook chirp = build_chirp_codebook(layer_plan(cfg.array, plan_distance(cfg)));
        return enhance ? enhance_codebook(chirp, cfg.enhance) : chirp;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"nfbeam - hierarchical near-field beam training"};
    app.require_subcommand(1);

    Overrides o;
    bool enhance = false, with_phases = false;
    int layer = 1, index = 0, oversample = 1;
    std::string out, axis = "snr", values, n_list = "256,512,1024", edge = "closed";

    auto *plan = app.add_subcommand("plan", "Print the layer plan");
    add_common(plan, o);

    auto *codebook = app.add_subcommand("codebook", "Build a hierarchical codebook and export it as JSON");
    add_common(codebook, o);
    codebook->add_flag("--enhance", enhance, "Run the manifold enhancement");
    codebook->add_flag("--with-phases", with_phases, "Store the phases of every codeword");
    codebook->add_option("--out", out, "Output JSON (stdout if empty)");

    auto *pattern = app.add_subcommand("pattern", "k-b gain grid of one codeword as CSV");
    add_common(pattern, o);
    pattern->add_flag("--enhance", enhance, "Use the enhanced codebook");
    pattern->add_option("--layer", layer, "Layer (1-based)")->check(CLI::PositiveNumber);
    pattern->add_option("--index", index, "Codeword index in the layer")->check(CLI::NonNegativeNumber);
    pattern->add_option("--oversample", oversample, "Grid oversampling")->check(CLI::PositiveNumber);
    pattern->add_option("--out", out, "Output CSV (stdout if empty)");

    auto *sweep = app.add_subcommand("sweep", "Monte Carlo sweep over snr, distance or antennas");
    add_common(sweep, o);
    add_experiment(sweep, o);
    sweep->add_option("axis", o.values["sweep.axis"], "snr|distance|antennas")->required();
    o.add(sweep, "--values", "sweep.values", "Axis values: list or start:step:stop");

    auto *layers = app.add_subcommand("layers", "Average gain after each layer decision");
    add_common(layers, o);
    add_experiment(layers, o);

    auto *overhead = app.add_subcommand("overhead", "Analytic pilot counts");
    add_common(overhead, o);
    overhead->add_option("--n-list", n_list, "Comma separated antenna counts");
    overhead->add_option("--out", out, "Output CSV (stdout if empty)");

    auto *enh = app.add_subcommand("enhance", "Run the enhancement and write objective traces as CSV");
    add_common(enh, o);
    enh->add_option("--out", out, "Output CSV (stdout if empty)");

    auto *overlap = app.add_subcommand("overlap", "Overlap between realistic and ideal dominant regions per layer");
    add_common(overlap, o);
    overlap->add_flag("--enhance", enhance, "Use the enhanced codebook");
    overlap->add_option("--oversample", oversample, "Grid oversampling")->check(CLI::PositiveNumber);
    overlap->add_option("--edge", edge, "Ownership of shared region edges: partition|closed")->check(CLI::IsMember({"partition", "closed"}));
    overlap->add_option("--out", out, "Output CSV (stdout if empty)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        const ExperimentConfig cfg = o.resolve();
        try
        {
            cfg.array.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError("array", e.what());
        }

        if (plan->parsed())
        {
            const LayerPlan p = layer_plan(cfg.array, plan_distance(cfg));
            const auto ray = rayleigh_distances(cfg.array, effective_rayleigh_fraction);
            std::printf("n_bs = %d\nf_c = %s\nfresnel_min_distance = %s\nrayleigh_classical = %s\n"
                        "rayleigh_effective = %s\nr_min_plan = %s\nk_max_required = %s\nk_max = %s\n"
                        "B_max = %s\nB_min = %s\ndelta_k = %s\nL_k1_rounded = %d\nL_k1 = %d\nL = %d\nN1 = %d\n"
                        "pilots_enhanced = %d\npilots_chirp = %d\n",
                        p.n_bs, format_double(cfg.array.f_c).c_str(), format_double(fresnel_min_distance(cfg.array)).c_str(),
                        format_double(ray.classical).c_str(), format_double(ray.effective).c_str(),
                        format_double(p.r_min_plan).c_str(), format_double(p.k_max_required).c_str(),
                        format_double(p.k_max).c_str(), format_double(p.B_max).c_str(), format_double(p.B_min).c_str(),
                        format_double(p.delta_k).c_str(), p.L_k1_rounded, p.L_k1, p.L, p.N1, p.pilots_enhanced(),
                        p.pilots_chirp());
        }
        else if (codebook->parsed())
        {
            const HierarchicalCodebook book = build_book(cfg, enhance);
            if (out.empty())
                std::cout << codebook_to_json(book, with_phases);
            else
                export_codebook(book, out, with_phases);
        }
        else if (pattern->parsed())
        {
            const HierarchicalCodebook book = build_book(cfg, enhance);
            if (layer > book.n_layers())
                throw ConfigError("--layer", "exceeds the number of layers");
            if (index >= int(book.layer(layer).codewords.size()))
                throw ConfigError("--index", "exceeds the layer size");
            const KbGrid grid = kb_gain_grid(book.codeword_vector(layer, index), KbGrid::for_plan(book.plan, oversample));
            write_text(out, grid_csv(grid));
        }
        else if (sweep->parsed())
        {
            emit_table(run_sweep(cfg), cfg);
            write_meta(cfg, "sweep");
        }
        else if (layers->parsed())
        {
            emit_table(per_layer_gain(cfg), cfg);
            write_meta(cfg, "layers");
        }
        else if (overhead->parsed())
        {
            std::vector<int> ns;
            for (double v : parse_double_list("--n-list", n_list))
                ns.push_back(int(v));
            write_text(out, to_csv(overhead_report(ns, cfg.array.f_c, cfg.r_min_plan)));
        }
        else if (enh->parsed())
        {
            const HierarchicalCodebook chirp = build_book(cfg, false);
            std::vector<EnhanceResult> res;
            enhance_codebook(chirp, cfg.enhance, &res);
            std::string csv = "layer,iteration,objective,gradient_norm,step\n";
            for (const auto &r : res)
                for (const auto &t : r.trace)
                    csv += std::to_string(t.layer) + ',' + std::to_string(t.iteration) + ',' + format_double(t.objective) +
                           ',' + format_double(t.gradient_norm) + ',' + format_double(t.step) + '\n';
            write_text(out, csv);
        }
        else if (overlap->parsed())
        {
            const HierarchicalCodebook book = build_book(cfg, enhance);
            const auto summary = overlap_summary(book, oversample, edge == "closed" ? EdgeRule::Closed : EdgeRule::Partition);
            std::string csv = "layer,mean,beams,degenerate\n";
            for (const auto &s : summary)
                csv += std::to_string(s.layer) + ',' + format_double(s.mean) + ',' + std::to_string(s.beams) + ',' +
                       std::to_string(s.degenerate) + '\n';
            csv += "all," + format_double(overlap_mean(summary)) + ",,\n";
            write_text(out, csv);
        }
    }
    catch (const ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
