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

#include "nfbeam/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace nfbeam
{
    LayerPlan layer_plan(const ArrayConfig &cfg, double r_min_plan)
    {
        cfg.validate();
        const double r_fresnel = fresnel_min_distance(cfg);
        if (!(r_min_plan >= r_fresnel * (1.0 - 1e-9)))
            throw std::invalid_argument("layer_plan: r_min_plan below the Fresnel bound " + std::to_string(r_fresnel) + " m");

        const int N = cfg.n_bs;
        LayerPlan p;
        p.n_bs = N;
        p.r_min_plan = r_min_plan;
        p.k_max_required = cfg.lambda() / (4.0 * r_min_plan);
        p.B_min = 2.0 / double(N);
        p.delta_k = 2.0 / (double(N) * double(N));

        const double ratio = p.k_max_required * double(N) / p.B_min;
        p.L_k1_rounded = int(std::lround(ratio));
        if (p.L_k1_rounded < 2)
            throw std::invalid_argument("layer_plan: fewer than two slope steps; near-field hierarchy not needed");

        int m = 0;
        while ((1 << m) < p.L_k1_rounded)
            ++m;
        p.L = m + 1;
        p.L_k1 = 1 << m;
        if (N % p.L_k1 != 0)
            throw std::invalid_argument("layer_plan: n_bs must be divisible by 2^(L-1) = " + std::to_string(p.L_k1));

        p.k_max = double(p.L_k1) * p.delta_k;
        p.B_max = p.k_max * double(N);
        p.N1 = 2 * N / p.L_k1; // = 2^(2-L) N
        return p;
    }

    double LayerPlan::height(int layer) const
    {
        return std::ldexp(k_max, 1 - layer);
    }

    double LayerPlan::side(int layer) const
    {
        return std::ldexp(B_max, 1 - layer);
    }

    std::string to_string(Orientation o)
    {
        return o == Orientation::BaseAtHighK ? "base_at_high_k" : "base_at_low_k";
    }

    Orientation orientation_from_string(const std::string &s)
    {
        if (s == "base_at_high_k")
            return Orientation::BaseAtHighK;
        if (s == "base_at_low_k")
            return Orientation::BaseAtLowK;
        throw std::invalid_argument("unknown orientation '" + s + "'");
    }

    std::string to_string(CodebookKind kind)
    {
        return kind == CodebookKind::SpatialChirp ? "spatial_chirp" : "enhanced";
    }

    std::array<KbPoint, 3> TriangleRegion::vertices() const
    {
        const double o = double(int(orientation));
        const double kb = apex.k + o * height;
        return {apex, KbPoint{kb, apex.b - 0.5 * side}, KbPoint{kb, apex.b + 0.5 * side}};
    }

    bool TriangleRegion::contains(const KbPoint &q, double tol) const
    {
        const double o = double(int(orientation));
        const double depth = (q.k - apex.k) * o;
        if (depth < -tol || depth > height + tol)
            return false;
        const double half = std::max(depth, 0.0) * side / (2.0 * height);
        return std::abs(wrap_intercept(q.b - apex.b)) <= half + tol;
    }

    std::array<TriangleRegion, 4> TriangleRegion::subdivide() const
    {
        const double o = double(int(orientation));
        const double h = 0.5 * height, s = 0.5 * side;
        const Orientation flipped = orientation == Orientation::BaseAtHighK ? Orientation::BaseAtLowK : Orientation::BaseAtHighK;
        std::array<TriangleRegion, 4> out;
        out[0] = {orientation, apex, h, s};
        out[1] = {orientation, {apex.k + o * h, wrap_intercept(apex.b - 0.5 * s)}, h, s};
        out[2] = {orientation, {apex.k + o * h, wrap_intercept(apex.b + 0.5 * s)}, h, s};
        out[3] = {flipped, {apex.k + o * height, apex.b}, h, s};
        return out;
    }

    const CodebookLayer &HierarchicalCodebook::layer(int l) const
    {
        if (l < 1 || l > n_layers())
            throw std::out_of_range("HierarchicalCodebook: layer index out of range");
        return layers[std::size_t(l - 1)];
    }

    SteeringVector HierarchicalCodebook::codeword_vector(int l, int i) const
    {
        const CodebookLayer &lay = layer(l);
        const KbPoint &c = lay.codewords.at(std::size_t(i)).coord;
        if (lay.basis.size() == 0)
            return approx_steering(c, n_bs());
        return rotate_codeword(lay.basis, c.k, c.b);
    }

    SteeringVector HierarchicalCodebook::beam_vector(int l, int beam) const
    {
        const CodebookLayer &lay = layer(l);
        const KbPoint &c = lay.beams.at(std::size_t(beam)).coord;
        if (lay.basis.size() == 0)
            return approx_steering(c, n_bs());
        return rotate_codeword(lay.basis, c.k, c.b);
    }

    std::size_t HierarchicalCodebook::size() const
    {
        std::size_t n = 0;
        for (const auto &l : layers)
            n += l.codewords.size();
        return n;
    }

    void index_beams(CodebookLayer &layer, const LayerPlan &plan)
    {
        const int N = plan.n_bs;
        std::map<std::pair<long, long>, std::vector<int>> groups;
        for (std::size_t i = 0; i < layer.codewords.size(); ++i)
        {
            const KbPoint &c = layer.codewords[i].coord;
            const long p = std::lround(c.k / plan.delta_k);
            long q = std::lround((c.b + 1.0) * double(N)) % (2L * N);
            if (q < 0)
                q += 2L * N;
            groups[{p, q}].push_back(int(i));
        }
        layer.beams.clear();
        for (auto &kv : groups)
        {
            Beam bm;
            bm.coord = layer.codewords[std::size_t(kv.second.front())].coord;
            bm.members = std::move(kv.second);
            for (int m : bm.members)
                layer.codewords[std::size_t(m)].beam = int(layer.beams.size());
            layer.beams.push_back(std::move(bm));
        }
    }

    std::vector<Codeword> top_layer_codebook(const LayerPlan &plan)
    {
        std::vector<Codeword> out;
        const int half = plan.N1 / 2;
        const double B = plan.B_max;
        for (int col = 0; col < 2; ++col)
            for (int i = 0; i < half; ++i)
            {
                Codeword w;
                w.layer = 1;
                if (col == 0)
                {
                    w.coord = {0.0, wrap_intercept(-1.0 + double(i) * B)};
                    w.orientation = Orientation::BaseAtHighK;
                }
                else
                {
                    w.coord = {plan.k_max, wrap_intercept(-1.0 + (double(i) + 0.5) * B)};
                    w.orientation = Orientation::BaseAtLowK;
                }
                w.region = {w.orientation, w.coord, plan.height(1), plan.side(1)};
                out.push_back(w);
            }
        return out;
    }

    std::array<KbPoint, 3> child_codewords(const Codeword &parent, const LayerPlan &plan)
    {
        if (parent.layer >= plan.L)
            throw std::invalid_argument("child_codewords: parent is on the bottom layer");
        const auto sub = parent.region.subdivide();
        return {sub[1].apex, sub[2].apex, sub[3].apex};
    }

    HierarchicalCodebook build_chirp_codebook(const LayerPlan &plan)
    {
        HierarchicalCodebook book;
        book.plan = plan;
        book.kind = CodebookKind::SpatialChirp;
        book.layers.resize(std::size_t(plan.L));
        book.layers[0].codewords = top_layer_codebook(plan);

        for (int l = 2; l <= plan.L; ++l)
        {
            auto &parents = book.layers[std::size_t(l - 2)].codewords;
            auto &kids = book.layers[std::size_t(l - 1)].codewords;
            kids.reserve(parents.size() * 4);
            for (std::size_t i = 0; i < parents.size(); ++i)
            {
                const auto sub = parents[i].region.subdivide();
                for (int c = 0; c < 4; ++c)
                {
                    Codeword w;
                    w.layer = l;
                    w.region = sub[std::size_t(c)];
                    w.coord = w.region.apex;
                    w.orientation = w.region.orientation;
                    w.parent = int(i);
                    parents[i].children[std::size_t(c)] = int(kids.size());
                    kids.push_back(w);
                }
            }
        }
        for (auto &lay : book.layers)
        {
            index_beams(lay, plan);
            lay.basis = cvec::Ones(plan.n_bs);
        }
        return book;
    }

    SteeringVector codeword_vector(const KbPoint &p, const ArrayConfig &cfg)
    {
        return approx_steering(p, cfg);
    }

    SteeringVector rotate_codeword(const SteeringVector &base, double dk, double db)
    {
        const Eigen::Index N = base.size();
        const double w = wrap_intercept(db);
        SteeringVector out(N);
        for (Eigen::Index i = 0; i < N; ++i)
        {
            const double n = double(i - N / 2 + 1);
            out[i] = base[i] * std::polar(1.0, -pi * (w * n + dk * n * n));
        }
        return out;
    }

    KbPoint FlatCodebook::coord(std::size_t i) const
    {
        const std::size_t p = i / std::size_t(n_bs), q = i % std::size_t(n_bs);
        return {double(p) * delta_k, -1.0 + 2.0 * double(q) / double(n_bs)};
    }

    SteeringVector FlatCodebook::vector(std::size_t i) const
    {
        return approx_steering(coord(i), n_bs);
    }

    std::size_t FlatCodebook::nearest(const KbPoint &p) const
    {
        long pi_ = std::lround(p.k / delta_k);
        pi_ = std::clamp(pi_, 0L, long(n_k - 1));
        long qi = std::lround((wrap_intercept(p.b) + 1.0) * 0.5 * double(n_bs)) % n_bs;
        return std::size_t(pi_) * std::size_t(n_bs) + std::size_t(qi);
    }

    FlatCodebook elementary_codebook(const LayerPlan &plan)
    {
        return {plan.n_bs, plan.L_k1 + 1, plan.delta_k, "elementary"};
    }

    FlatCodebook dft_codebook(const ArrayConfig &cfg)
    {
        cfg.validate();
        return {cfg.n_bs, 1, 2.0 / (double(cfg.n_bs) * double(cfg.n_bs)), "dft"};
    }

    bool region_feasible(const TriangleRegion &t, double lambda, double r_min_serve)
    {
        const double c = std::isinf(r_min_serve) ? 0.0 : lambda / (4.0 * r_min_serve);
        const double lo = t.apex.b - 0.5 * t.side, hi = t.apex.b + 0.5 * t.side;
        const double slope = 2.0 * t.height / t.side;
        const bool high = t.orientation == Orientation::BaseAtHighK;

        auto g = [&](double b)
        {
            const double w = wrap_intercept(b);
            const double kmin = high ? t.apex.k + slope * std::abs(b - t.apex.b) : t.apex.k - t.height;
            return kmin - c * (1.0 - w * w);
        };

        // g is piecewise smooth; its minimum sits at an endpoint, a kink or a stationary point
        std::vector<double> w_star{-1.0, 1.0};
        if (c > 0.0)
        {
            if (high)
            {
                w_star.push_back(slope / (2.0 * c));
                w_star.push_back(-slope / (2.0 * c));
            }
            else
                w_star.push_back(0.0);
        }
        double best = std::min(g(lo), g(hi));
        best = std::min(best, g(t.apex.b));
        for (double w : w_star)
            for (int m = -2; m <= 2; ++m)
            {
                const double b = w + 2.0 * double(m);
                if (b >= lo && b <= hi)
                    best = std::min(best, g(b));
            }
        return best <= 1e-15;
    }

    HierarchicalCodebook prune_codebook(const HierarchicalCodebook &book, double r_min_serve, const ArrayConfig &cfg)
    {
        if (!(r_min_serve >= book.plan.r_min_plan * (1.0 - 1e-12)))
            throw std::invalid_argument("prune_codebook: r_min_serve below the planning distance");

        HierarchicalCodebook out;
        out.plan = book.plan;
        out.kind = book.kind;
        out.layers.resize(book.layers.size());

        std::vector<int> prev_map;
        for (std::size_t l = 0; l < book.layers.size(); ++l)
        {
            const auto &src = book.layers[l].codewords;
            std::vector<int> map(src.size(), -1);
            auto &dst = out.layers[l].codewords;
            for (std::size_t i = 0; i < src.size(); ++i)
            {
                const bool parent_ok = l == 0 || (src[i].parent >= 0 && prev_map[std::size_t(src[i].parent)] >= 0);
                if (!parent_ok || !region_feasible(src[i].region, cfg.lambda(), r_min_serve))
                    continue;
                map[i] = int(dst.size());
                Codeword w = src[i];
                w.parent = l == 0 ? -1 : prev_map[std::size_t(src[i].parent)];
                dst.push_back(w);
            }
            if (l > 0) // re-link parents to surviving children
            {
                auto &parents = out.layers[l - 1].codewords;
                for (auto &p : parents)
                    for (auto &c : p.children)
                        c = c >= 0 ? map[std::size_t(c)] : -1;
            }
            prev_map = std::move(map);
            out.layers[l].basis = book.layers[l].basis;
            index_beams(out.layers[l], out.plan);
        }
        for (auto &w : out.layers.back().codewords)
            w.children = {-1, -1, -1, -1};
        return out;
    }
}
