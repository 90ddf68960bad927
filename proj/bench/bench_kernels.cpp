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

// Serial reference kernels against the FFT/OpenMP versions.

#include "nfbeam/codebook.hpp"
#include "nfbeam/kernels.hpp"

#include <benchmark/benchmark.h>

using namespace nfbeam;

namespace
{
    struct Fixture
    {
        LayerPlan plan;
        cvec basis;
        std::vector<KbPoint> beams;
        std::vector<double> ks;

        explicit Fixture(int n)
        {
            const ArrayConfig cfg(n, 50e9);
            plan = layer_plan(cfg, fresnel_min_distance(cfg));
            Rng rng(derive_seed(3, std::uint64_t(n)));
            std::uniform_real_distribution<double> u(-pi, pi);
            basis.resize(n);
            for (int i = 0; i < n; ++i)
                basis[i] = std::polar(1.0, u(rng));
            const HierarchicalCodebook book = build_chirp_codebook(plan);
            for (const auto &b : book.layer(plan.L).beams)
                beams.push_back(b.coord);
            for (int r = 0; r <= plan.L_k1; ++r)
                ks.push_back(r * plan.delta_k);
        }
    };

    const Fixture &fixture(int n)
    {
        static Fixture f64(64), f256(256);
        return n == 64 ? f64 : f256;
    }

    template <bool Ref>
    void bm_gain_rows(benchmark::State &st)
    {
        const Fixture &f = fixture(int(st.range(0)));
        for (auto _ : st)
        {
            auto g = Ref ? reference::gain_rows(f.basis, f.ks, f.plan.n_bs) : kernels::gain_rows(f.basis, f.ks, f.plan.n_bs);
            benchmark::DoNotOptimize(g.data());
        }
    }

    template <bool Ref>
    void bm_labels(benchmark::State &st)
    {
        const Fixture &f = fixture(int(st.range(0)));
        for (auto _ : st)
        {
            auto r = Ref ? reference::dominant_labels(f.basis, f.beams, f.plan.delta_k, f.plan.L_k1 + 1, f.plan.n_bs)
                         : kernels::dominant_labels(f.basis, f.beams, f.plan.delta_k, f.plan.L_k1 + 1, f.plan.n_bs);
            benchmark::DoNotOptimize(r.labels.data());
        }
    }

    template <bool Ref>
    void bm_adjoint(benchmark::State &st)
    {
        const Fixture &f = fixture(int(st.range(0)));
        for (auto _ : st)
        {
            auto z = Ref ? reference::steering_adjoint(f.basis, f.ks) : kernels::steering_adjoint(f.basis, f.ks);
            benchmark::DoNotOptimize(z.data());
        }
    }
}

BENCHMARK(bm_gain_rows<true>)->Name("gain_rows/reference")->Arg(64)->Arg(256);
BENCHMARK(bm_gain_rows<false>)->Name("gain_rows/parallel")->Arg(64)->Arg(256);
BENCHMARK(bm_labels<true>)->Name("dominant_labels/reference")->Arg(64);
BENCHMARK(bm_labels<false>)->Name("dominant_labels/parallel")->Arg(64)->Arg(256);
BENCHMARK(bm_adjoint<true>)->Name("steering_adjoint/reference")->Arg(64)->Arg(256);
BENCHMARK(bm_adjoint<false>)->Name("steering_adjoint/parallel")->Arg(64)->Arg(256);

BENCHMARK_MAIN();
