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

#include "nfbeam/harness.hpp"

#include "json.hpp"
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <set>

namespace nfbeam
{
    namespace
    {
        const std::vector<std::pair<Scheme, std::string>> &scheme_names()
        {
            static const std::vector<std::pair<Scheme, std::string>> names{
                {Scheme::PerfectCSI, "PerfectCSI"},
                {Scheme::ExhaustiveElementary, "ExhaustiveElementary"},
                {Scheme::ExhaustiveDFT, "ExhaustiveDFT"},
                {Scheme::HierChirp, "HierChirp"},
                {Scheme::HierEnhanced, "HierEnhanced"}};
            return names;
        }

        bool has(const std::vector<Scheme> &v, Scheme s)
        {
            return std::find(v.begin(), v.end(), s) != v.end();
        }

        template <typename F>
        auto as_config(const std::string &field, F &&f) -> decltype(f())
        {
            try
            {
                return f();
            }
            catch (const ConfigError &)
            {
                throw;
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError(field, e.what());
            }
        }

        struct Stat
        {
            double mean = 0.0;
            double se = 0.0;
        };

        Stat stats(const std::vector<double> &x)
        {
            Stat s;
            const std::size_t n = x.size();
            if (n == 0)
                return s;
            double sum = 0.0;
            for (double v : x)
                sum += v;
            s.mean = sum / double(n);
            if (n > 1)
            {
                double ss = 0.0;
                for (double v : x)
                    ss += (v - s.mean) * (v - s.mean);
                s.se = std::sqrt(ss / double(n - 1)) / std::sqrt(double(n));
            }
            return s;
        }

        enum Metric
        {
            M_SUCCESS,
            M_GAIN,
            M_REL_GAIN,
            M_RATE,
            M_COUNT
        };

        const char *metric_name(int m)
        {
            static const char *names[] = {"success_rate", "gain", "relative_gain", "sum_rate"};
            return names[m];
        }

        TrainingResult run_scheme(Scheme s, const SchemeContext &ctx, const Channel &ch, const MeasurementModel &model, Rng &rng)
        {
            switch (s)
            {
            case Scheme::PerfectCSI:
                return perfect_csi(ch);
            case Scheme::ExhaustiveElementary:
                return exhaustive_search(ctx.elementary, ch, model, rng);
            case Scheme::ExhaustiveDFT:
                return exhaustive_search(ctx.dft, ch, model, rng);
            case Scheme::HierChirp:
                return hierarchical_search(ctx.chirp, ch, model, rng);
            case Scheme::HierEnhanced:
                return hierarchical_search(ctx.enhanced, ch, model, rng);
            }
            throw std::logic_error("run_scheme: unknown scheme");
        }

        // Channel of one trial; identical across axis points (common random numbers)
        Channel draw_channel(const ExperimentConfig &cfg, const ArrayConfig &arr, long trial, double fixed_r0)
        {
            Rng rng(derive_seed(cfg.seed, std::uint64_t(trial), 0));
            std::uniform_real_distribution<double> ut(-1.0, 1.0), ur(cfg.r_lo, cfg.r_hi);
            const double theta = ut(rng);
            const double r_draw = ur(rng);
            const double r0 = std::isnan(fixed_r0) ? r_draw : fixed_r0;
            ChannelDraw draw;
            draw.r_lo = cfg.r_lo;
            draw.r_hi = cfg.r_hi;
            return synthesize_channel(theta, r0, cfg.nlos_count, rng, arr, draw);
        }

        template <typename Body>
        void parallel_trials(long trials, int workers, Body &&body)
        {
            std::exception_ptr err;
            const int nt = resolve_workers(workers);
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
            for (long t = 0; t < trials; ++t)
            {
                try
                {
                    body(t);
                }
                catch (...)
                {
#pragma omp critical(nfbeam_trial_error)
                    if (!err)
                        err = std::current_exception();
                }
            }
            if (err)
                std::rethrow_exception(err);
        }

        void run_point(const ExperimentConfig &cfg, const SchemeContext &ctx, double axis_value, double snr_db,
                       double fixed_r0, ResultTable &out)
        {
            const std::size_t S = cfg.schemes.size();
            const long T = cfg.trials;
            std::vector<std::vector<double>> values(S * M_COUNT, std::vector<double>(std::size_t(T)));
            std::vector<std::vector<double>> pilots(S, std::vector<double>(std::size_t(T)));
            const MeasurementModel model{snr_db};

            parallel_trials(T, cfg.workers, [&](long t)
                            {
                const Channel ch = draw_channel(cfg, ctx.cfg, t, fixed_r0);
                const double bound = beamforming_gain(ch, perfect_csi_beamformer(ch));
                for (std::size_t s = 0; s < S; ++s)
                {
                    Rng rng(derive_seed(cfg.seed, std::uint64_t(t), 1 + std::uint64_t(cfg.schemes[s])));
                    TrainingResult r = run_scheme(cfg.schemes[s], ctx, ch, model, rng);
                    r.success = success(r, ch, ctx.plan, ctx.cfg);
                    const std::size_t i = std::size_t(t);
                    values[s * M_COUNT + M_SUCCESS][i] = r.success ? 1.0 : 0.0;
                    values[s * M_COUNT + M_GAIN][i] = r.gain;
                    values[s * M_COUNT + M_REL_GAIN][i] = bound > 0.0 ? r.gain / bound : 0.0;
                    values[s * M_COUNT + M_RATE][i] = sum_rate(r.gain, snr_db, ctx.cfg.n_bs, cfg.rate);
                    pilots[s][i] = double(r.measurements);
                } });

            for (std::size_t s = 0; s < S; ++s)
            {
                const long meas = std::lround(stats(pilots[s]).mean);
                for (int m = 0; m < M_COUNT; ++m)
                {
                    const Stat st = stats(values[s * M_COUNT + std::size_t(m)]);
                    out.rows.push_back({to_string(cfg.schemes[s]), axis_value, metric_name(m), st.mean, st.se, T, meas});
                }
            }
        }

        nlohmann::json num(double v)
        {
            return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
        }

        double num_from(const nlohmann::json &j)
        {
            return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
        }
    }

    std::string to_string(Scheme s)
    {
        for (const auto &kv : scheme_names())
            if (kv.first == s)
                return kv.second;
        throw std::logic_error("to_string: unknown scheme");
    }

    Scheme scheme_from_string(const std::string &s)
    {
        for (const auto &kv : scheme_names())
            if (kv.second == s)
                return kv.first;
        throw std::invalid_argument("unknown scheme '" + s + "'");
    }

    std::vector<Scheme> all_schemes()
    {
        return {Scheme::PerfectCSI, Scheme::ExhaustiveElementary, Scheme::ExhaustiveDFT, Scheme::HierChirp, Scheme::HierEnhanced};
    }

    std::string to_string(SweepAxis a)
    {
        switch (a)
        {
        case SweepAxis::Snr:
            return "snr";
        case SweepAxis::Distance:
            return "distance";
        case SweepAxis::Antennas:
            return "antennas";
        }
        return "?";
    }

    SweepAxis axis_from_string(const std::string &s)
    {
        if (s == "snr")
            return SweepAxis::Snr;
        if (s == "distance")
            return SweepAxis::Distance;
        if (s == "antennas")
            return SweepAxis::Antennas;
        throw std::invalid_argument("unknown sweep axis '" + s + "'");
    }

    ExperimentConfig ExperimentConfig::desk()
    {
        return ExperimentConfig{};
    }

    ExperimentConfig ExperimentConfig::full()
    {
        ExperimentConfig c;
        c.array = ArrayConfig(512, 50e9);
        c.trials = 2000;
        return c;
    }

    void ExperimentConfig::validate() const
    {
        as_config("array.n_bs", [&]
                  { array.validate(); return 0; });
        if (trials < 1)
            throw ConfigError("sweep.trials", "must be >= 1");
        if (nlos_count < 0)
            throw ConfigError("channel.nlos", "must be >= 0");
        if (!(r_hi >= r_lo))
            throw ConfigError("channel.r_hi", "must not be below channel.r_lo");
        if (format != "csv" && format != "json")
            throw ConfigError("output.format", "must be csv or json");
        if (schemes.empty())
            throw ConfigError("sweep.schemes", "no scheme selected");
        if (axis_values.empty())
            throw ConfigError("sweep.values", "empty axis");
        if (enhance.iterations < 1)
            throw ConfigError("enhance.iterations", "must be >= 1");
        if (enhance.inner_steps < 1)
            throw ConfigError("enhance.inner_steps", "must be >= 1");

        std::vector<int> sizes{array.n_bs};
        if (axis == SweepAxis::Antennas)
        {
            sizes.clear();
            for (double v : axis_values)
            {
                if (v != std::floor(v) || v < 4 || std::fmod(v, 2.0) != 0.0)
                    throw ConfigError("sweep.values", "antenna counts must be even integers >= 4");
                sizes.push_back(int(v));
            }
        }
        for (int n : sizes)
        {
            const ArrayConfig a(n, array.f_c, array.c);
            const double rf = fresnel_min_distance(a);
            if (r_lo < rf)
                throw ConfigError("channel.r_lo", "below the Fresnel bound " + format_double(rf) + " m for N = " + std::to_string(n));
            if (r_min_plan > 0.0 && r_min_plan < rf * (1.0 - 1e-9))
                throw ConfigError("plan.r_min", "below the Fresnel bound");
            if (axis == SweepAxis::Distance)
                for (double r : axis_values)
                    if (r < rf)
                        throw ConfigError("sweep.values", "distance below the Fresnel bound");
        }
    }

    int resolve_workers(int configured)
    {
        if (const char *env = std::getenv("NFBEAM_WORKERS"))
        {
            char *end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end == env || *end != '\0' || v < 1)
                throw ConfigError("NFBEAM_WORKERS", "must be a positive integer");
            return int(v);
        }
        return configured > 0 ? configured : omp_get_max_threads();
    }

    ExperimentConfig config_from_key_values(const KeyValues &kv, ExperimentConfig c)
    {
        static const std::set<std::string> known{
            "array.n_bs", "array.f_c", "array.c", "plan.r_min", "channel.r_lo", "channel.r_hi", "channel.nlos",
            "sweep.axis", "sweep.values", "sweep.snr_db", "sweep.trials", "sweep.seed", "sweep.schemes",
            "output.path", "output.format", "enhance.iterations", "enhance.tol_factor", "enhance.inner_steps",
            "enhance.weighting", "enhance.support", "enhance.perturbation", "enhance.seed", "rate.normalization",
            "run.workers"};
        for (const auto &e : kv)
            if (!known.count(e.first))
                throw ConfigError(e.first, "unknown key");

        c.array.n_bs = int(get_long(kv, "array.n_bs", c.array.n_bs));
        c.array.f_c = get_double(kv, "array.f_c", c.array.f_c);
        c.array.c = get_double(kv, "array.c", c.array.c);
        const std::string rmin = get_string(kv, "plan.r_min", "");
        if (rmin == "fresnel")
            c.r_min_plan = 0.0;
        else if (!rmin.empty())
            c.r_min_plan = get_double(kv, "plan.r_min", 0.0);
        c.r_lo = get_double(kv, "channel.r_lo", c.r_lo);
        c.r_hi = get_double(kv, "channel.r_hi", c.r_hi);
        c.nlos_count = int(get_long(kv, "channel.nlos", c.nlos_count));
        if (kv.count("sweep.axis"))
            c.axis = as_config("sweep.axis", [&]
                               { return axis_from_string(kv.at("sweep.axis")); });
        if (kv.count("sweep.values"))
            c.axis_values = parse_double_list("sweep.values", kv.at("sweep.values"));
        c.snr_db = get_double(kv, "sweep.snr_db", c.snr_db);
        c.trials = int(get_long(kv, "sweep.trials", c.trials));
        c.seed = std::uint64_t(get_long(kv, "sweep.seed", long(c.seed)));
        if (kv.count("sweep.schemes"))
        {
            c.schemes.clear();
            for (const auto &s : split_list(kv.at("sweep.schemes")))
                c.schemes.push_back(as_config("sweep.schemes", [&]
                                              { return scheme_from_string(s); }));
        }
        c.output_path = get_string(kv, "output.path", c.output_path);
        c.format = get_string(kv, "output.format", c.format);
        c.enhance.iterations = int(get_long(kv, "enhance.iterations", c.enhance.iterations));
        c.enhance.tol_factor = get_double(kv, "enhance.tol_factor", c.enhance.tol_factor);
        c.enhance.inner_steps = int(get_long(kv, "enhance.inner_steps", c.enhance.inner_steps));
        if (kv.count("enhance.weighting"))
            c.enhance.weighting = as_config("enhance.weighting", [&]
                                            { return weighting_from_string(kv.at("enhance.weighting")); });
        if (kv.count("enhance.support"))
            c.enhance.support = as_config("enhance.support", [&]
                                          { return support_from_string(kv.at("enhance.support")); });
        c.enhance.init_perturbation = get_double(kv, "enhance.perturbation", c.enhance.init_perturbation);
        c.enhance.seed = std::uint64_t(get_long(kv, "enhance.seed", long(c.enhance.seed)));
        if (kv.count("rate.normalization"))
            c.rate = as_config("rate.normalization", [&]
                               { return rate_from_string(kv.at("rate.normalization")); });
        c.workers = int(get_long(kv, "run.workers", c.workers));
        return c;
    }

    const ResultRow *ResultTable::find(const std::string &scheme, double axis, const std::string &metric) const
    {
        for (const auto &r : rows)
            if (r.scheme == scheme && r.metric == metric && r.axis == axis)
                return &r;
        return nullptr;
    }

    bool operator==(const ResultRow &a, const ResultRow &b)
    {
        auto same = [](double x, double y)
        { return x == y || (std::isnan(x) && std::isnan(y)); };
        return a.scheme == b.scheme && same(a.axis, b.axis) && a.metric == b.metric && same(a.mean, b.mean) &&
               same(a.stderr_, b.stderr_) && a.trials == b.trials && a.measurements == b.measurements;
    }

    SchemeContext make_context(const ArrayConfig &cfg, double r_min_plan, const EnhanceOptions &enhance, bool need_enhanced)
    {
        SchemeContext ctx;
        ctx.cfg = cfg;
        ctx.plan = layer_plan(cfg, r_min_plan > 0.0 ? r_min_plan : fresnel_min_distance(cfg));
        ctx.chirp = build_chirp_codebook(ctx.plan);
        ctx.elementary = elementary_codebook(ctx.plan);
        ctx.dft = dft_codebook(cfg);
        if (need_enhanced)
            ctx.enhanced = enhance_codebook(ctx.chirp, enhance, &ctx.enhance_results);
        return ctx;
    }

    ResultTable run_sweep(const ExperimentConfig &cfg, const SchemeContext &ctx)
    {
        cfg.validate();
        if (cfg.axis == SweepAxis::Antennas)
            throw ConfigError("sweep.axis", "antenna sweeps build their own codebooks");
        ResultTable out;
        for (double v : cfg.axis_values)
        {
            if (cfg.axis == SweepAxis::Snr)
                run_point(cfg, ctx, v, v, std::numeric_limits<double>::quiet_NaN(), out);
            else
                run_point(cfg, ctx, v, cfg.snr_db, v, out);
        }
        return out;
    }

    ResultTable run_sweep(const ExperimentConfig &cfg)
    {
        cfg.validate();
        const bool need_enh = has(cfg.schemes, Scheme::HierEnhanced);
        if (cfg.axis != SweepAxis::Antennas)
            return run_sweep(cfg, make_context(cfg.array, cfg.r_min_plan, cfg.enhance, need_enh));

        ResultTable out;
        for (double v : cfg.axis_values)
        {
            const SchemeContext ctx = make_context(ArrayConfig(int(v), cfg.array.f_c, cfg.array.c), cfg.r_min_plan, cfg.enhance, need_enh);
            run_point(cfg, ctx, v, cfg.snr_db, std::numeric_limits<double>::quiet_NaN(), out);
        }
        return out;
    }

    ResultTable per_layer_gain(const ExperimentConfig &cfg, const SchemeContext &ctx)
    {
        cfg.validate();
        const int L = ctx.plan.L;
        const long T = cfg.trials;
        const MeasurementModel model{cfg.snr_db};
        // [kind][layer][trial] gain and relative gain
        std::vector<std::vector<double>> gain(2 * std::size_t(L), std::vector<double>(std::size_t(T)));
        std::vector<std::vector<double>> rel(2 * std::size_t(L), std::vector<double>(std::size_t(T)));
        std::vector<std::vector<double>> base(6, std::vector<double>(std::size_t(T)));

        parallel_trials(T, cfg.workers, [&](long t)
                        {
            const Channel ch = draw_channel(cfg, ctx.cfg, t, std::numeric_limits<double>::quiet_NaN());
            const double bound = beamforming_gain(ch, perfect_csi_beamformer(ch));
            const std::size_t i = std::size_t(t);
            const HierarchicalCodebook *books[2] = {&ctx.chirp, &ctx.enhanced};
            const Scheme ids[2] = {Scheme::HierChirp, Scheme::HierEnhanced};
            for (int k = 0; k < 2; ++k)
            {
                Rng rng(derive_seed(cfg.seed, std::uint64_t(t), 1 + std::uint64_t(ids[k])));
                const TrainingResult r = hierarchical_search(*books[k], ch, model, rng);
                for (int l = 0; l < L; ++l)
                {
                    const double g = l < int(r.per_layer.size()) ? r.per_layer[std::size_t(l)].gain : r.gain;
                    gain[std::size_t(k * L + l)][i] = g;
                    rel[std::size_t(k * L + l)][i] = bound > 0.0 ? g / bound : 0.0;
                }
            }
            Rng re(derive_seed(cfg.seed, std::uint64_t(t), 1 + std::uint64_t(Scheme::ExhaustiveElementary)));
            Rng rd(derive_seed(cfg.seed, std::uint64_t(t), 1 + std::uint64_t(Scheme::ExhaustiveDFT)));
            const double ge = exhaustive_search(ctx.elementary, ch, model, re).gain;
            const double gd = exhaustive_search(ctx.dft, ch, model, rd).gain;
            base[0][i] = bound;
            base[1][i] = 1.0;
            base[2][i] = ge;
            base[3][i] = bound > 0.0 ? ge / bound : 0.0;
            base[4][i] = gd;
            base[5][i] = bound > 0.0 ? gd / bound : 0.0; });

        ResultTable out;
        const char *names[2] = {"HierChirp", "HierEnhanced"};
        const long pil[2] = {ctx.plan.pilots_chirp(), ctx.plan.pilots_enhanced()};
        const char *bnames[3] = {"PerfectCSI", "ExhaustiveElementary", "ExhaustiveDFT"};
        const long bpil[3] = {0, long(ctx.elementary.size()), long(ctx.dft.size())};
        for (int l = 1; l <= L; ++l)
        {
            for (int k = 0; k < 2; ++k)
            {
                const Stat g = stats(gain[std::size_t(k * L + l - 1)]);
                const Stat r = stats(rel[std::size_t(k * L + l - 1)]);
                out.rows.push_back({names[k], double(l), "gain", g.mean, g.se, T, pil[k]});
                out.rows.push_back({names[k], double(l), "relative_gain", r.mean, r.se, T, pil[k]});
            }
            for (int b = 0; b < 3; ++b)
            {
                const Stat g = stats(base[std::size_t(2 * b)]);
                const Stat r = stats(base[std::size_t(2 * b + 1)]);
                out.rows.push_back({bnames[b], double(l), "gain", g.mean, g.se, T, bpil[b]});
                out.rows.push_back({bnames[b], double(l), "relative_gain", r.mean, r.se, T, bpil[b]});
            }
        }
        const double gc = stats(gain[std::size_t(L - 1)]).mean, ge = stats(gain[std::size_t(2 * L - 1)]).mean;
        out.rows.push_back({"HierEnhanced", double(L), "relative_gap_vs_chirp", gc > 0.0 ? (ge - gc) / gc : 0.0, 0.0, T, pil[1]});
        return out;
    }

    ResultTable per_layer_gain(const ExperimentConfig &cfg)
    {
        cfg.validate();
        return per_layer_gain(cfg, make_context(cfg.array, cfg.r_min_plan, cfg.enhance, true));
    }

    ResultTable overhead_report(const std::vector<int> &n_bs, double f_c, double r_min_plan)
    {
        ResultTable out;
        for (int n : n_bs)
        {
            const ArrayConfig cfg(n, f_c);
            const LayerPlan p = layer_plan(cfg, r_min_plan > 0.0 ? r_min_plan : fresnel_min_distance(cfg));
            const long enh = p.pilots_enhanced(), chirp = p.pilots_chirp();
            const long exh = long(elementary_codebook(p).size());
            const long nominal = long(n) * long(p.L_k1);
            const long binary = long(p.N1 / 2) + 2L * (p.L - 1); // 2^(1-L) N + 2(L-1)
            const double axis = double(n);
            auto row = [&](const char *s, const char *m, double v, long meas)
            { out.rows.push_back({s, axis, m, v, 0.0, 1, meas}); };
            row("HierEnhanced", "pilots", double(enh), enh);
            row("HierChirp", "pilots", double(chirp), chirp);
            row("ExhaustiveElementary", "pilots", double(exh), exh);
            row("ExhaustiveNominal", "pilots", double(nominal), nominal);
            row("ExhaustiveDFT", "pilots", double(n), n);
            row("FarFieldBinary", "pilots", double(binary), binary);
            row("HierEnhanced", "reduction_pct", 100.0 * (1.0 - double(enh) / double(exh)), enh);
            row("HierChirp", "reduction_pct", 100.0 * (1.0 - double(chirp) / double(exh)), chirp);
        }
        return out;
    }

    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    std::string to_csv(const ResultTable &t)
    {
        std::string out = "scheme,axis,metric,mean,stderr,trials,measurements\n";
        for (const auto &r : t.rows)
        {
            out += r.scheme + ',' + format_double(r.axis) + ',' + r.metric + ',' + format_double(r.mean) + ',' +
                   format_double(r.stderr_) + ',' + std::to_string(r.trials) + ',' + std::to_string(r.measurements) + '\n';
        }
        return out;
    }

    std::string to_json(const ResultTable &t)
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &r : t.rows)
            arr.push_back({{"scheme", r.scheme}, {"axis", num(r.axis)}, {"metric", r.metric}, {"mean", num(r.mean)},
                           {"stderr", num(r.stderr_)}, {"trials", r.trials}, {"measurements", r.measurements}});
        return arr.dump(2) + "\n";
    }

    ResultTable table_from_json(const std::string &text)
    {
        ResultTable t;
        const nlohmann::json arr = nlohmann::json::parse(text);
        if (!arr.is_array())
            throw std::invalid_argument("table_from_json: expected an array");
        for (const auto &o : arr)
            t.rows.push_back({o.at("scheme").get<std::string>(), num_from(o.at("axis")), o.at("metric").get<std::string>(),
                              num_from(o.at("mean")), num_from(o.at("stderr")), o.at("trials").get<long>(),
                              o.at("measurements").get<long>()});
        return t;
    }

    void export_table(const ResultTable &t, const std::string &path, const std::string &format)
    {
        std::string body;
        if (format == "csv")
            body = to_csv(t);
        else if (format == "json")
            body = to_json(t);
        else
            throw ConfigError("output.format", "must be csv or json");
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("export: cannot open '" + path + "' for writing");
        f << body;
        f.close();
        if (!f)
            throw std::runtime_error("export: write failed for '" + path + "'");
    }
}
