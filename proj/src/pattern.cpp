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

#include "nfbeam/pattern.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace nfbeam
{
    namespace
    {
        using BoolMat = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

        // Visit grid cells inside the closed triangle (intercepts modulo 2)
        template <typename F>
        void rasterize(const TriangleRegion &t, const KbGrid &g, F &&visit)
        {
            const double o = double(int(t.orientation));
            const double k_lo = std::min(t.apex.k, t.apex.k + o * t.height);
            const double k_hi = std::max(t.apex.k, t.apex.k + o * t.height);
            const double eps = 1e-9;
            const int r0 = std::max(0, int(std::ceil(k_lo / g.dk - eps)));
            const int r1 = std::min(g.n_rows - 1, int(std::floor(k_hi / g.dk + eps)));
            for (int r = r0; r <= r1; ++r)
            {
                const double depth = std::max(0.0, (g.k(r) - t.apex.k) * o);
                const double half = depth * t.side / (2.0 * t.height);
                const double scale = 0.5 * double(g.M);
                const long q0 = long(std::ceil((t.apex.b - half + 1.0) * scale - eps));
                const long q1 = long(std::floor((t.apex.b + half + 1.0) * scale + eps));
                for (long q = q0; q <= q1 && q < q0 + g.M; ++q)
                {
                    long qq = q % g.M;
                    if (qq < 0)
                        qq += g.M;
                    visit(r, int(qq));
                }
            }
        }

        // Lowest beam index whose closed ideal region holds the cell, -1 if none
        Eigen::MatrixXi ideal_labels(const HierarchicalCodebook &book, int layer, const KbGrid &grid)
        {
            const CodebookLayer &lay = book.layer(layer);
            Eigen::MatrixXi lab = Eigen::MatrixXi::Constant(grid.n_rows, grid.M, std::numeric_limits<int>::max());
            for (std::size_t c = 0; c < lay.beams.size(); ++c)
                for (int m : lay.beams[c].members)
                    rasterize(lay.codewords[std::size_t(m)].region, grid, [&](int r, int q)
                              { lab(r, q) = std::min(lab(r, q), int(c)); });
            for (Eigen::Index i = 0; i < lab.size(); ++i)
                if (lab(i) == std::numeric_limits<int>::max())
                    lab(i) = -1;
            return lab;
        }

        bool beam_contains(const CodebookLayer &lay, int beam, const KbPoint &p)
        {
            for (int m : lay.beams[std::size_t(beam)].members)
                if (lay.codewords[std::size_t(m)].region.contains(p, 1e-12))
                    return true;
            return false;
        }

        // Asymptotic auxiliary functions f, g of the Fresnel integrals for large x
        FresnelCS fresnel_asymptotic(double x)
        {
            const double z = pi * x * x;
            const double z2 = z * z;
            double f = 0.0, g = 0.0, term_f = 1.0, term_g = 1.0;
            for (int m = 0; m < 40; ++m)
            {
                if (m > 0)
                {
                    const double nf = term_f * -double((4 * m - 1) * (4 * m - 3)) / z2;
                    const double ng = term_g * -double((4 * m + 1) * (4 * m - 1)) / z2;
                    if (std::abs(nf) > std::abs(term_f)) // divergent tail of the asymptotic series
                        break;
                    term_f = nf;
                    term_g = ng;
                }
                f += term_f;
                g += term_g;
                if (std::abs(term_f) < 1e-18 && std::abs(term_g) < 1e-18)
                    break;
            }
            f /= pi * x;
            g /= pi * pi * x * x * x;
            const double s = std::sin(0.5 * z), c = std::cos(0.5 * z);
            return {0.5 + f * s - g * c, 0.5 - f * c - g * s};
        }
    }

    std::vector<double> KbGrid::k_values() const
    {
        std::vector<double> v(static_cast<std::size_t>(n_rows));
        for (int r = 0; r < n_rows; ++r)
            v[std::size_t(r)] = k(r);
        return v;
    }

    KbGrid KbGrid::for_plan(const LayerPlan &plan, int oversample)
    {
        if (oversample < 1)
            throw std::invalid_argument("KbGrid: oversample must be >= 1");
        KbGrid g;
        g.dk = plan.delta_k / double(oversample);
        g.n_rows = plan.L_k1 * oversample + 1;
        g.M = plan.n_bs * oversample;
        return g;
    }

    double coherence(const cvec &w, const cvec &v)
    {
        if (w.size() != v.size())
            throw std::invalid_argument("coherence: length mismatch");
        return std::abs(w.dot(v));
    }

    KbGrid kb_gain_grid(const cvec &w, const KbGrid &grid)
    {
        KbGrid out = grid;
        out.values = kernels::gain_rows(w, grid.k_values(), grid.M);
        return out;
    }

    double column_power_check(double k0, const cvec &v)
    {
        return kernels::steering_adjoint(v, {k0}).squaredNorm();
    }

    double ideal_gain(const KbPoint &center, const KbPoint &query, int n_bs)
    {
        const double N = double(n_bs);
        const double dk = std::abs(center.k - query.k);
        const double B = dk * N + 2.0 / N;
        if (std::abs(wrap_intercept(query.b - center.b)) > 0.5 * B + 1e-15)
            return 0.0;
        return 1.0 / std::sqrt(dk + 2.0 / (N * N));
    }

    FresnelCS fresnel_integrals(double X)
    {
        if (!std::isfinite(X))
        {
            if (std::isnan(X))
                throw std::invalid_argument("fresnel_integrals: NaN argument");
            return X > 0 ? FresnelCS{0.5, 0.5} : FresnelCS{-0.5, -0.5};
        }
        const double x = std::abs(X);
        FresnelCS r;
        if (x > 6.0)
            r = fresnel_asymptotic(x);
        else if (x == 0.0)
            r = {0.0, 0.0};
        else
        {
            using boost::math::quadrature::gauss_kronrod;
            r.C = gauss_kronrod<double, 61>::integrate([](double t)
                                                       { return std::cos(0.5 * pi * t * t); },
                                                       0.0, x, 20, 1e-15);
            r.S = gauss_kronrod<double, 61>::integrate([](double t)
                                                       { return std::sin(0.5 * pi * t * t); },
                                                       0.0, x, 20, 1e-15);
        }
        if (X < 0.0)
            return {-r.C, -r.S};
        return r;
    }

    double psp_gain(double theta0, const KbPoint &p, int n_bs)
    {
        if (!(p.k > 0.0))
            throw std::invalid_argument("psp_gain: slope must be positive");
        const double N = double(n_bs);
        const double s = std::sqrt(2.0 * p.k);
        const double off = wrap_intercept(theta0 - p.b);
        const FresnelCS f1 = fresnel_integrals((p.k * N + off) / s);
        const FresnelCS f2 = fresnel_integrals((p.k * N - off) / s);
        return std::hypot(f1.C + f2.C, f1.S + f2.S) / s;
    }

    LabelResult dominant_region(const HierarchicalCodebook &book, int layer, const KbGrid &grid)
    {
        const CodebookLayer &lay = book.layer(layer);
        std::vector<KbPoint> coords;
        coords.reserve(lay.beams.size());
        for (const auto &bm : lay.beams)
            coords.push_back(bm.coord);
        const cvec basis = lay.basis.size() ? lay.basis : cvec(cvec::Ones(book.n_bs()));
        return kernels::dominant_labels(basis, coords, grid.dk, grid.n_rows, grid.M);
    }

    LabelResult dominant_region(const std::vector<cvec> &codewords, const KbGrid &grid)
    {
        if (codewords.size() < 2)
            throw std::invalid_argument("dominant_region: need at least two codewords");
        const double tol = label_tie_tolerance * std::sqrt(double(codewords.front().size()));
        LabelResult res;
        res.labels = Eigen::MatrixXi::Constant(grid.n_rows, grid.M, -1);
        res.best = Eigen::MatrixXd::Constant(grid.n_rows, grid.M, -1.0);
        const auto ks = grid.k_values();
        for (std::size_t c = 0; c < codewords.size(); ++c)
        {
            const Eigen::MatrixXd g = kernels::gain_rows(codewords[c], ks, grid.M);
            for (Eigen::Index i = 0; i < g.size(); ++i)
                if (g(i) > res.best(i) + tol)
                {
                    res.best(i) = g(i);
                    res.labels(i) = int(c);
                }
        }
        return res;
    }

    BoolMat ideal_mask(const HierarchicalCodebook &book, int layer, int beam, const KbGrid &grid, EdgeRule rule)
    {
        const CodebookLayer &lay = book.layer(layer);
        if (beam < 0 || beam >= int(lay.beams.size()))
            throw std::out_of_range("ideal_mask: beam index out of range");
        if (rule == EdgeRule::Partition)
            return ideal_labels(book, layer, grid).array() == beam;
        BoolMat m = BoolMat::Constant(grid.n_rows, grid.M, false);
        for (int idx : lay.beams[std::size_t(beam)].members)
            rasterize(lay.codewords[std::size_t(idx)].region, grid, [&](int r, int q)
                      { m(r, q) = true; });
        return m;
    }

    double overlap_metric(const HierarchicalCodebook &book, int layer, int beam, const LabelResult &labels,
                          const KbGrid &grid, EdgeRule rule)
    {
        const BoolMat ideal = ideal_mask(book, layer, beam, grid, rule);
        long own = 0, hit = 0;
        for (Eigen::Index i = 0; i < labels.labels.size(); ++i)
            if (labels.labels(i) == beam)
            {
                ++own;
                hit += ideal(i) ? 1 : 0;
            }
        if (own == 0)
            throw std::domain_error("overlap_metric: beam has an empty dominant region");
        return double(hit) / double(own);
    }

    LayerOverlap layer_overlap(const HierarchicalCodebook &book, int layer, const KbGrid &grid, EdgeRule rule)
    {
        const CodebookLayer &lay = book.layer(layer);
        const LabelResult real = dominant_region(book, layer, grid);
        const std::size_t C = lay.beams.size();
        std::vector<long> own(C, 0), hit(C, 0);

        Eigen::MatrixXi ideal;
        if (rule == EdgeRule::Partition)
            ideal = ideal_labels(book, layer, grid);

        for (int r = 0; r < grid.n_rows; ++r)
            for (int q = 0; q < grid.M; ++q)
            {
                const int c = real.labels(r, q);
                if (c < 0)
                    continue;
                ++own[std::size_t(c)];
                const bool in = rule == EdgeRule::Partition ? ideal(r, q) == c : beam_contains(lay, c, {grid.k(r), grid.b(q)});
                hit[std::size_t(c)] += in ? 1 : 0;
            }

        LayerOverlap out;
        out.layer = layer;
        out.beams = int(C);
        out.per_beam.assign(C, std::numeric_limits<double>::quiet_NaN());
        double sum = 0.0;
        int used = 0;
        for (std::size_t c = 0; c < C; ++c)
        {
            if (own[c] == 0)
            {
                ++out.degenerate;
                continue;
            }
            out.per_beam[c] = double(hit[c]) / double(own[c]);
            sum += out.per_beam[c];
            ++used;
        }
        out.mean = used ? sum / double(used) : std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    std::vector<LayerOverlap> overlap_summary(const HierarchicalCodebook &book, int oversample, EdgeRule rule)
    {
        const KbGrid grid = KbGrid::for_plan(book.plan, oversample);
        std::vector<LayerOverlap> out;
        for (int l = 1; l <= book.n_layers(); ++l)
            out.push_back(layer_overlap(book, l, grid, rule));
        return out;
    }

    double overlap_mean(const std::vector<LayerOverlap> &summary)
    {
        if (summary.empty())
            return std::numeric_limits<double>::quiet_NaN();
        double s = 0.0;
        for (const auto &l : summary)
            s += l.mean;
        return s / double(summary.size());
    }

    std::string grid_csv(const KbGrid &grid)
    {
        if (grid.values.rows() != grid.n_rows || grid.values.cols() != grid.M)
            throw std::invalid_argument("grid_csv: grid has no values");
        std::string out = "k\\b";
        char buf[40];
        for (int q = 0; q < grid.M; ++q)
        {
            std::snprintf(buf, sizeof buf, ",%.16e", grid.b(q));
            out += buf;
        }
        out += '\n';
        for (int r = 0; r < grid.n_rows; ++r)
        {
            std::snprintf(buf, sizeof buf, "%.16e", grid.k(r));
            out += buf;
            for (int q = 0; q < grid.M; ++q)
            {
                std::snprintf(buf, sizeof buf, ",%.16e", grid.values(r, q));
                out += buf;
            }
            out += '\n';
        }
        return out;
    }

    void export_grid_csv(const KbGrid &grid, const std::string &path)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("export_grid_csv: cannot open '" + path + "'");
        f << grid_csv(grid);
        if (!f)
            throw std::runtime_error("export_grid_csv: write failed for '" + path + "'");
    }
}
