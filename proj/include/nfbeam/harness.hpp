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

#ifndef nfbeam_harness_H
#define nfbeam_harness_H

#include "nfbeam/codebook.hpp"
#include "nfbeam/config.hpp"
#include "nfbeam/enhance.hpp"
#include "nfbeam/training.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nfbeam
{
    enum class Scheme
    {
        PerfectCSI,
        ExhaustiveElementary,
        ExhaustiveDFT,
        HierChirp,
        HierEnhanced
    };

    std::string to_string(Scheme s);
    Scheme scheme_from_string(const std::string &s);
    std::vector<Scheme> all_schemes();

    enum class SweepAxis
    {
        Snr,
        Distance,
        Antennas
    };

    std::string to_string(SweepAxis a);
    SweepAxis axis_from_string(const std::string &s);

    struct ExperimentConfig
    {
        ArrayConfig array{256, 50e9};
        double r_min_plan = 0.0; // <= 0: Fresnel bound of the array
        double r_lo = 13.0;
        double r_hi = 150.0;
        int nlos_count = 3;
        SweepAxis axis = SweepAxis::Snr;
        std::vector<double> axis_values{10.0};
        double snr_db = 10.0; // used when the axis is not SNR
        int trials = 500;
        std::uint64_t seed = 1;
        std::vector<Scheme> schemes = all_schemes();
        std::string output_path;
        std::string format = "csv";
        EnhanceOptions enhance;
        RateNormalization rate = RateNormalization::PerAntenna;
        int workers = 0; // 0: OpenMP default; NFBEAM_WORKERS overrides

        void validate() const; // throws ConfigError

        static ExperimentConfig desk(); // N = 256, 500 trials
        static ExperimentConfig full(); // N = 512, 2000 trials
    };

    // Apply "section.key = value" entries on top of base
    ExperimentConfig config_from_key_values(const KeyValues &kv, ExperimentConfig base = ExperimentConfig::desk());
    int resolve_workers(int configured); // honours NFBEAM_WORKERS

    struct ResultRow
    {
        std::string scheme;
        double axis = 0.0;
        std::string metric;
        double mean = 0.0;
        double stderr_ = 0.0;
        long trials = 0;
        long measurements = 0;
    };

    struct ResultTable
    {
        std::vector<ResultRow> rows;
        const ResultRow *find(const std::string &scheme, double axis, const std::string &metric) const;
    };

    bool operator==(const ResultRow &a, const ResultRow &b);

    // Codebooks and plan for one array size
    struct SchemeContext
    {
        ArrayConfig cfg;
        LayerPlan plan;
        HierarchicalCodebook chirp;
        HierarchicalCodebook enhanced;
        FlatCodebook elementary;
        FlatCodebook dft;
        std::vector<EnhanceResult> enhance_results;
    };

    SchemeContext make_context(const ArrayConfig &cfg, double r_min_plan, const EnhanceOptions &enhance, bool need_enhanced = true);

    ResultTable run_sweep(const ExperimentConfig &cfg);
    // Same, reusing prebuilt codebooks (SNR and distance axes only)
    ResultTable run_sweep(const ExperimentConfig &cfg, const SchemeContext &ctx);

    ResultTable per_layer_gain(const ExperimentConfig &cfg);
    ResultTable per_layer_gain(const ExperimentConfig &cfg, const SchemeContext &ctx);

    ResultTable overhead_report(const std::vector<int> &n_bs, double f_c, double r_min_plan = 0.0);

    std::string to_csv(const ResultTable &t);
    std::string to_json(const ResultTable &t);
    ResultTable table_from_json(const std::string &text);
    void export_table(const ResultTable &t, const std::string &path, const std::string &format);

    std::string format_double(double v); // 17 significant digits, C locale
}

#endif
