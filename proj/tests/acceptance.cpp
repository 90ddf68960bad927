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
//
// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails. "--full" adds the N = 512 exhaustive-success run.

#include "nfbeam/codebook.hpp"
#include "nfbeam/enhance.hpp"
#include "nfbeam/harness.hpp"
#include "nfbeam/pattern.hpp"
#include "nfbeam/training.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace nfbeam;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    int failures = 0;

    void criterion(int id, const std::string &name, double budget_s, const std::function<Outcome()> &body)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = body();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= budget_s;
        const bool ok = o.pass && in_time;
        failures += ok ? 0 : 1;
        std::printf("criterion %2d: %s  %s | %s | %.2f s (budget %.0f s)%s\n", id, ok ? "PASS" : "FAIL", name.c_str(),
                    o.detail.c_str(), secs, budget_s, in_time ? "" : " OVER BUDGET");
        std::fflush(stdout);
    }

    std::string fmt(const char *f, double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, v);
        return buf;
    }

    LayerPlan fresnel_plan(int n)
    {
        const ArrayConfig cfg(n, 50e9);
        return layer_plan(cfg, fresnel_min_distance(cfg));
    }

    cvec random_phases(int n, Rng &rng)
    {
        std::uniform_real_distribution<double> u(-pi, pi);
        cvec v(n);
        for (int i = 0; i < n; ++i)
            v[i] = std::polar(1.0, u(rng));
        return v;
    }

    // ---- tiling helpers: everything from the vertex description of the regions

    struct Interval
    {
        double lo, hi;
    };

    bool cross_section(const TriangleRegion &t, double k, Interval &out)
    {
        const double depth = (k - t.apex.k) * double(int(t.orientation));
        if (depth < 0.0 || depth > t.height)
            return false;
        const double half = 0.5 * t.side * depth / t.height;
        out = {t.apex.b - half, t.apex.b + half};
        return true;
    }

    // covered length and total length with multiplicity, intercepts modulo 2
    std::pair<double, double> coverage(const std::vector<Interval> &iv)
    {
        std::vector<Interval> pieces;
        double total = 0.0;
        for (auto v : iv)
        {
            total += v.hi - v.lo;
            const double s = 2.0 * std::floor((v.lo + 1.0) / 2.0);
            v.lo -= s;
            v.hi -= s;
            if (v.hi > 1.0)
            {
                pieces.push_back({v.lo, 1.0});
                pieces.push_back({-1.0, v.hi - 2.0});
            }
            else
                pieces.push_back(v);
        }
        std::sort(pieces.begin(), pieces.end(), [](const Interval &a, const Interval &b)
                  { return a.lo < b.lo; });
        double covered = 0.0, reach = -1.0;
        for (const auto &p : pieces)
        {
            const double lo = std::max(p.lo, reach);
            if (p.hi > lo)
            {
                covered += p.hi - lo;
                reach = p.hi;
            }
        }
        return {covered, total};
    }

    // Fresnel integrals by adaptive Gauss-Kronrod on short panels (long double)
    std::pair<long double, long double> fresnel_quadrature(double X)
    {
        using boost::math::quadrature::gauss_kronrod;
        const long double PI = 3.14159265358979323846264338327950288L;
        const int panels = std::max(1, int(std::ceil(std::abs(X) / 0.05)));
        const long double h = (long double)X / panels;
        long double c = 0, s = 0;
        for (int p = 0; p < panels; ++p)
        {
            const long double a = p * h, b = a + h;
            c += gauss_kronrod<long double, 31>::integrate([&](long double t) { return std::cos(PI * t * t / 2); }, a, b, 8, 1e-18L);
            s += gauss_kronrod<long double, 31>::integrate([&](long double t) { return std::sin(PI * t * t / 2); }, a, b, 8, 1e-18L);
        }
        return {c, s};
    }

    std::vector<double> layer_means(const std::vector<LayerOverlap> &s)
    {
        std::vector<double> m;
        for (const auto &l : s)
            m.push_back(l.mean);
        return m;
    }

    std::string join(const std::vector<double> &v)
    {
        std::ostringstream o;
        for (std::size_t i = 0; i < v.size(); ++i)
            o << (i ? "," : "") << fmt("%.3f", v[i]);
        return o.str();
    }
}

int main(int argc, char **argv)
{
    bool full = false;
    for (int i = 1; i < argc; ++i)
        full = full || std::string(argv[i]) == "--full";

    // 1. plan numbers at the reference configuration
    criterion(1, "reference plan", 1.0, []
              {
        const ArrayConfig cfg(512, 50e9);
        const double r = fresnel_min_distance(cfg);
        const LayerPlan p = layer_plan(cfg, r);
        const bool ok = std::abs(r - 12.29) <= 0.01 && p.L == 5 && p.N1 == 64 && p.delta_k == 2.0 / (512.0 * 512.0) &&
                        p.pilots_enhanced() == 80 && p.pilots_chirp() == 76;
        return Outcome{ok, "r_min=" + fmt("%.4f", r) + " L=" + std::to_string(p.L) + " N1=" + std::to_string(p.N1) +
                               " dk*N^2/2=" + fmt("%.17g", p.delta_k * 512.0 * 512.0 / 2.0) +
                               " pilots=" + std::to_string(p.pilots_enhanced()) + "/" + std::to_string(p.pilots_chirp())}; });

    // 2. constant column power of the coherence of any unit-modulus vector
    criterion(2, "column power constant", 30.0, []
              {
        double worst = 0.0;
        for (int n : {64, 512})
        {
            const LayerPlan p = fresnel_plan(n);
            Rng rng(derive_seed(2, std::uint64_t(n)));
            std::uniform_real_distribution<double> uk(0.0, p.k_max);
            for (int v = 0; v < 100; ++v)
            {
                const cvec x = random_phases(n, rng);
                for (int k = 0; k < 5; ++k)
                    worst = std::max(worst, std::abs(column_power_check(uk(rng), x) / n - 1.0));
            }
        }
        return Outcome{worst <= 1e-9, "max relative deviation " + fmt("%.2e", worst) + " (<= 1e-9)"}; });

    // 3. ideal triangles tile each layer and each parent is the union of its four children
    criterion(3, "ideal region tiling", 10.0, []
              {
        double worst_cover = 0.0, worst_area = 0.0;
        long bad_points = 0, points = 0;
        for (int n : {64, 256, 512})
        {
            const LayerPlan p = fresnel_plan(n);
            const HierarchicalCodebook book = build_chirp_codebook(p);
            Rng rng(derive_seed(3, std::uint64_t(n)));
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (int l = 1; l <= p.L; ++l)
            {
                const auto &cw = book.layer(l).codewords;
                double area = 0.0;
                for (const auto &w : cw)
                    area += w.region.area();
                worst_area = std::max(worst_area, std::abs(area / (2.0 * p.k_max) - 1.0));
                for (int s = 0; s < 41; ++s)
                {
                    const double k = p.k_max * (s + 0.5 + 0.1 * std::sin(double(s))) / 41.0;
                    std::vector<Interval> iv;
                    Interval v;
                    for (const auto &w : cw)
                        if (cross_section(w.region, k, v))
                            iv.push_back(v);
                    const auto [covered, total] = coverage(iv);
                    worst_cover = std::max({worst_cover, std::abs(covered - 2.0), std::abs(total - 2.0)});
                }
                if (l == p.L)
                    continue;
                for (std::size_t i = 0; i < cw.size(); ++i)
                {
                    const Codeword &par = cw[i];
                    double kids_area = 0.0;
                    for (int c : par.children)
                        kids_area += book.codeword(l + 1, c).region.area();
                    worst_area = std::max(worst_area, std::abs(kids_area / par.region.area() - 1.0));
                    for (int t = 0; t < 4; ++t)
                    {
                        const double depth = std::sqrt(u(rng)) * par.region.height;
                        const double off = (u(rng) - 0.5) * par.region.side * depth / par.region.height;
                        const KbPoint q{par.coord.k + double(int(par.orientation)) * depth, wrap_intercept(par.coord.b + off)};
                        int hits = 0;
                        for (int c : par.children)
                            hits += book.codeword(l + 1, c).region.contains(q, 0.0) ? 1 : 0;
                        bad_points += hits == 1 ? 0 : 1;
                        ++points;
                    }
                }
            }
        }
        const bool ok = worst_cover < 1e-12 && worst_area < 1e-12 && bad_points == 0;
        return Outcome{ok, "strip coverage error " + fmt("%.1e", worst_cover) + ", area error " + fmt("%.1e", worst_area) +
                               ", " + std::to_string(bad_points) + "/" + std::to_string(points) + " parent points not in exactly one child"}; });

    // 4. descent of the alternating scheme and gradient correctness
    criterion(4, "enhancement descent", 300.0, []
              {
        const LayerPlan p = fresnel_plan(256);
        EnhanceOptions opt;
        opt.iterations = 200;
        double worst_rise = -std::numeric_limits<double>::infinity();
        int iterations = 0;
        for (int l = 1; l <= p.L; ++l)
        {
            const EnhanceResult r = enhance_layer(l, p, opt);
            for (std::size_t i = 1; i < r.trace.size(); ++i)
                worst_rise = std::max(worst_rise, r.trace[i].objective - r.trace[i - 1].objective);
            iterations += int(r.trace.size());
        }
        const LayerPlan q = fresnel_plan(64);
        Rng rng(4);
        std::normal_distribution<double> g;
        double worst_fd = 0.0;
        for (int l = 1; l <= q.L; ++l)
        {
            const LayerTarget t = ideal_target(l, q);
            const cvec b = random_phases(q.n_bs, rng);
            const Eigen::MatrixXd psi = phase_update(b, t);
            const cvec eg = euclidean_gradient(b, psi, t);
            for (int k = 0; k < 50; ++k)
            {
                cvec d(q.n_bs);
                for (int i = 0; i < q.n_bs; ++i)
                    d[i] = cplx(g(rng), g(rng));
                const double e = 1e-6;
                const double fd = (objective(b + e * d, psi, t) - objective(b - e * d, psi, t)) / (2 * e);
                const double an = 2.0 * std::real(eg.dot(d));
                worst_fd = std::max(worst_fd, std::abs(fd - an) / std::max(std::abs(an), 1e-3 * eg.norm() * d.norm()));
            }
        }
        const bool ok = worst_rise <= 1e-10 && worst_fd <= 1e-5;
        return Outcome{ok, "largest objective increase " + fmt("%.3g", worst_rise) + " over " + std::to_string(iterations) +
                               " iterations (<= 1e-10), gradient FD error " + fmt("%.2e", worst_fd) + " (<= 1e-5)"}; });

    // 5. overlap levels and ordering
    criterion(5, "overlap levels and ordering", 1200.0, []
              {
        const EnhanceOptions opt;
        const HierarchicalCodebook c512 = build_chirp_codebook(fresnel_plan(512));
        const HierarchicalCodebook e512 = enhance_codebook(c512, opt);
        const double xc = overlap_mean(overlap_summary(c512)), xe = overlap_mean(overlap_summary(e512));
        const HierarchicalCodebook c256 = build_chirp_codebook(fresnel_plan(256));
        const HierarchicalCodebook e256 = enhance_codebook(c256, opt);
        const auto mc = layer_means(overlap_summary(c256)), me = layer_means(overlap_summary(e256));
        bool ordered = true;
        for (std::size_t l = 0; l < mc.size(); ++l)
            ordered = ordered && me[l] > mc[l];
        const bool ok = xe >= 0.91 && xe <= 0.99 && xc >= 0.80 && xc <= 0.90 && ordered;

        // informational: the power-consistent, uniformly weighted target
        EnhanceOptions alt;
        alt.weighting = Weighting::Uniform;
        alt.support = TargetSupport::PowerConsistent;
        const double xa = overlap_mean(overlap_summary(enhance_codebook(c512, alt)));
        return Outcome{ok, "N=512 enhanced " + fmt("%.3f", xe) + " (0.91..0.99), chirp " + fmt("%.3f", xc) +
                               " (0.80..0.90); N=256 per layer enhanced [" + join(me) + "] vs chirp [" + join(mc) +
                               "]; power-consistent uniform target: " + fmt("%.3f", xa)}; });

    // 6. exhaustive search over the elementary codebook
    criterion(6, "elementary exhaustive success", full ? 3600.0 : 600.0, [full]
              {
        std::string detail;
        bool ok = true;
        for (const ExperimentConfig base : {ExperimentConfig::desk(), ExperimentConfig::full()})
        {
            if (base.array.n_bs == 512 && !full)
                continue;
            ExperimentConfig c = base;
            c.trials = 500;
            c.axis = SweepAxis::Snr;
            c.axis_values = {10.0};
            c.schemes = {Scheme::ExhaustiveElementary};
            const ResultTable t = run_sweep(c);
            const ResultRow *r = t.find("ExhaustiveElementary", 10.0, "success_rate");
            ok = ok && r->mean >= 0.98;
            detail += "N=" + std::to_string(c.array.n_bs) + " success " + fmt("%.3f", r->mean) + " +- " + fmt("%.3f", r->stderr_) + " (>= 0.98); ";
        }
        return Outcome{ok, detail}; });

    // 7. hierarchical enhanced rate against the DFT sweep at 30 m
    criterion(7, "near-field rate advantage", 1200.0, []
              {
        ExperimentConfig c = ExperimentConfig::full();
        c.trials = 500;
        c.axis = SweepAxis::Distance;
        c.axis_values = {30.0};
        c.snr_db = 10.0;
        c.schemes = {Scheme::ExhaustiveDFT, Scheme::HierEnhanced, Scheme::HierChirp};
        const ResultTable t = run_sweep(c);
        const double dft = t.find("ExhaustiveDFT", 30.0, "sum_rate")->mean;
        const double enh = t.find("HierEnhanced", 30.0, "sum_rate")->mean;
        const double chirp = t.find("HierChirp", 30.0, "sum_rate")->mean;
        return Outcome{enh >= 1.5 * dft, "rate enhanced " + fmt("%.3f", enh) + ", DFT " + fmt("%.3f", dft) + ", ratio " +
                                             fmt("%.3f", enh / dft) + " (>= 1.5); chirp ratio " + fmt("%.3f", chirp / dft)}; });

    // 8. training overhead
    criterion(8, "overhead table", 1.0, []
              {
        const ResultTable t = overhead_report({256, 512, 1024}, 50e9);
        const double enh = t.find("HierEnhanced", 512.0, "pilots")->mean;
        const double chirp = t.find("HierChirp", 512.0, "pilots")->mean;
        const double nominal = t.find("ExhaustiveNominal", 512.0, "pilots")->mean;
        const double elem = t.find("ExhaustiveElementary", 512.0, "pilots")->mean;
        const double binary = t.find("FarFieldBinary", 512.0, "pilots")->mean;
        bool ok = enh == 80 && chirp == 76 && nominal == 8192 && std::abs(elem - 8192) <= 0.1 * 8192 && binary == 40;
        std::string red;
        for (double n : {256.0, 512.0, 1024.0})
        {
            const double pc = t.find("HierEnhanced", n, "reduction_pct")->mean;
            ok = ok && pc > 99.0;
            red += " N=" + std::to_string(int(n)) + ":" + fmt("%.2f%%", pc);
        }
        return Outcome{ok, "N=512 pilots " + fmt("%g", enh) + "/" + fmt("%g", chirp) + ", exhaustive " + fmt("%g", nominal) +
                               " nominal / " + fmt("%g", elem) + " elementary, binary " + fmt("%g", binary) +
                               "; reduction vs elementary (> 99%):" + red}; });

    // 9. deterministic sweeps
    criterion(9, "determinism", 600.0, []
              {
        ExperimentConfig c = ExperimentConfig::desk();
        c.trials = 60;
        c.axis_values = {-5.0, 10.0};
        const SchemeContext ctx = make_context(c.array, c.r_min_plan, c.enhance);
        c.workers = 1;
        const std::string a = to_csv(run_sweep(c, ctx));
        const std::string b = to_csv(run_sweep(c, ctx));
        c.workers = 3;
        const std::string d = to_csv(run_sweep(c, ctx));
        c.axis = SweepAxis::Distance;
        c.axis_values = {20.0, 60.0};
        const std::string e = to_csv(run_sweep(c, ctx)), f = to_csv(run_sweep(c, ctx));
        const bool ok = a == b && a == d && e == f;
        return Outcome{ok, "byte-identical CSV for repeated runs and 1 vs 3 workers (" + std::to_string(a.size()) + " bytes)"}; });

    // 10. stationary-phase gain and Fresnel integrals
    criterion(10, "stationary-phase fidelity", 60.0, []
              {
        double worst_f = 0.0;
        for (double X : {0.05, 0.5, 1.0, 2.0, 3.7, 5.9, 6.1, 8.0, 12.0, 20.0})
        {
            const auto [c, s] = fresnel_quadrature(X);
            const FresnelCS f = fresnel_integrals(X);
            worst_f = std::max({worst_f, std::abs(f.C - double(c)), std::abs(f.S - double(s))});
        }
        const int N = 256;
        const double k = 16.0 / (N * N), b = 0.0;
        const cvec w = approx_steering({k, b}, N);
        double worst = 0.0;
        for (int i = -40; i <= 40; ++i)
        {
            const double th = b + 0.999 * (k * N / 2) * i / 40.0;
            cplx sum = 0.0;
            for (int n = 0; n < N; ++n)
                sum += std::polar(1.0, pi * th * (n - N / 2 + 1)) * w[n];
            worst = std::max(worst, std::abs(psp_gain(th, {k, b}, N) - std::abs(sum)) / std::abs(sum));
        }
        return Outcome{worst_f <= 1e-10 && worst < 0.15, "Fresnel error " + fmt("%.1e", worst_f) + " (<= 1e-10), PSP relative error " +
                                                             fmt("%.3f", worst) + " (< 0.15)"}; });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
