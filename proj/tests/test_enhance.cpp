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

#include "nfbeam/enhance.hpp"

#include "catch_amalgamated.hpp"

#include <cmath>

using namespace nfbeam;
using Catch::Approx;

namespace
{
    LayerPlan plan_for(int n)
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

    cvec random_complex(int n, Rng &rng)
    {
        std::normal_distribution<double> g;
        cvec v(n);
        for (int i = 0; i < n; ++i)
            v[i] = cplx(g(rng), g(rng));
        return v;
    }

    Eigen::VectorXcd vec(const Eigen::MatrixXcd &m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

    double unit_modulus_error(const cvec &v) { return (v.cwiseAbs().array() - 1.0).abs().maxCoeff(); }
}

TEST_CASE("ideal layer target")
{
    const LayerPlan p = plan_for(512);
    const int N = p.n_bs;
    for (int l = 1; l <= p.L; ++l)
    {
        const LayerTarget t = ideal_target(l, p);
        const int Lk = 1 << (p.L - l + 1);
        REQUIRE(int(t.p.size()) == 2 * Lk - 1);
        CHECK(t.r.rows() == 2 * Lk - 1);
        CHECK(t.r.cols() == N);
        CHECK(t.phi.minCoeff() > 0.0);
        CHECK(t.phi(0, 0) == Lk);
        CHECK(t.phi(2 * Lk - 2, 5) == Lk);
        CHECK(t.phi(Lk - 1, 0) == 1.0);
        // zero slope: a single cell at b = 0
        const Eigen::Index mid = Lk - 1;
        CHECK(t.p[std::size_t(mid)] == 0);
        CHECK((t.r.row(mid).array() > 0.0).count() == 1);
        CHECK(t.r(mid, N / 2) == Approx(std::sqrt(double(N))));
        CHECK(t.r.maxCoeff() == Approx(22.627417).margin(1e-6));
        for (Eigen::Index i = 0; i < t.r.size(); ++i)
        {
            const double v = t.r(i);
            if (v != 0.0)
            {
                const int ap = std::abs(t.p[std::size_t(i % t.r.rows())]);
                CHECK(v == Approx(std::sqrt(double(N) / (ap + 1))).epsilon(1e-14));
            }
        }
    }
    CHECK(ideal_target(2, p, Weighting::Uniform).phi.maxCoeff() == 1.0);
    CHECK_THROWS_AS(ideal_target(0, p), std::invalid_argument);
    CHECK_THROWS_AS(ideal_target(p.L + 1, p), std::invalid_argument);
}

TEST_CASE("power-consistent target carries power N per slope")
{
    const LayerPlan p = plan_for(256);
    const LayerTarget t = ideal_target(2, p, Weighting::SideWeighted, TargetSupport::PowerConsistent);
    for (Eigen::Index i = 0; i < t.r.rows(); ++i)
        CHECK(t.r.row(i).squaredNorm() == Approx(double(p.n_bs)).epsilon(1e-12));
}

TEST_CASE("implicit operator matches the dense matrix")
{
    const LayerPlan p = plan_for(32);
    const LayerTarget t = ideal_target(2, p);
    const Eigen::MatrixXcd A = t.dense();
    for (Eigen::Index c = 0; c < A.cols(); ++c)
        CHECK(A.col(c).norm() == Approx(1.0).epsilon(1e-13));
    Rng rng(2);
    const cvec b = random_complex(p.n_bs, rng);
    CHECK((vec(t.adjoint(b)) - A.adjoint() * b).cwiseAbs().maxCoeff() < 1e-11);
    const Eigen::MatrixXcd z = Eigen::MatrixXcd::Random(t.r.rows(), t.r.cols());
    CHECK((t.apply(z) - A * vec(z)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("phase update is the exact minimiser over the auxiliary phases")
{
    const LayerPlan p = plan_for(64);
    const LayerTarget t = ideal_target(2, p);
    // b equal to a column of A (up to the normalisation) yields a zero phase there
    const int pi_ = 1, q = 40;
    const cvec col = approx_steering({t.k_values[std::size_t(pi_)], -1.0 + 2.0 * q / p.n_bs}, p.n_bs);
    CHECK(std::abs(phase_update(col, t)(pi_, q)) < 1e-12);

    Rng rng(8);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 1000; ++trial)
    {
        const cvec b = random_phases(p.n_bs, rng);
        const Eigen::MatrixXd psi = phase_update(b, t);
        Eigen::MatrixXd other = psi;
        for (Eigen::Index i = 0; i < other.size(); ++i)
            other(i) += 0.1 * g(rng);
        if (trial % 50 == 0) // the full objective is costlier; the per-cell argument is exact
            CHECK(objective(b, other, t) >= objective(b, psi, t));
        const Eigen::MatrixXcd z = t.adjoint(b);
        const Eigen::Index i = Eigen::Index(rng() % std::uint64_t(z.size()));
        CHECK(std::norm(std::polar(t.r(i), other(i)) - z(i)) >= std::norm(std::polar(t.r(i), psi(i)) - z(i)) - 1e-12);
    }
    // angle(0) := 0
    LayerTarget zero = t;
    const Eigen::MatrixXd psi0 = phase_update(cvec::Zero(p.n_bs), zero);
    CHECK(psi0.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("euclidean gradient")
{
    const LayerPlan p = plan_for(64);
    Rng rng(13);
    for (int l : {1, 3, p.L})
    {
        const LayerTarget t = ideal_target(l, p);
        const cvec b = random_phases(p.n_bs, rng);
        const Eigen::MatrixXd psi = phase_update(b, t);
        const cvec g = euclidean_gradient(b, psi, t);
        // directional derivative of f(b + e d) at e = 0 is 2 Re(g^H d)
        for (int k = 0; k < 50; ++k)
        {
            const cvec d = random_complex(p.n_bs, rng);
            const double e = 1e-6;
            const double fd = (objective(b + e * d, psi, t) - objective(b - e * d, psi, t)) / (2 * e);
            const double an = 2.0 * std::real(g.dot(d));
            CHECK(std::abs(fd - an) <= 1e-5 * std::max(std::abs(an), 1e-3 * g.norm() * d.norm()));
        }

        LayerTarget scaled = t;
        scaled.phi *= 3.0;
        CHECK((euclidean_gradient(b, psi, scaled) - 9.0 * g).cwiseAbs().maxCoeff() < 1e-9 * g.cwiseAbs().maxCoeff());

        // exact fit: target built from the iterate itself
        LayerTarget fit = t;
        fit.r = t.adjoint(b).cwiseAbs();
        CHECK(euclidean_gradient(b, phase_update(b, fit), fit).norm() < 1e-10);
        CHECK(objective(b, phase_update(b, fit), fit) < 1e-20 * t.r.size() + 1e-18);
    }
}

TEST_CASE("riemannian gradient and retraction")
{
    Rng rng(4);
    const int N = 32;
    const cvec b = random_phases(N, rng);
    CHECK(riemannian_gradient(b, b).cwiseAbs().maxCoeff() < 1e-15);
    const cvec jb = cplx(0.0, 1.0) * b;
    CHECK((riemannian_gradient(b, jb) - jb).cwiseAbs().maxCoeff() < 1e-15);
    const cvec t = riemannian_gradient(b, random_complex(N, rng));
    double res = 0.0;
    for (int n = 0; n < N; ++n)
        res = std::max(res, std::abs(std::real(t[n] * std::conj(b[n]))));
    CHECK(res < 1e-12);

    CHECK((retract(b, b) - b).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((retract(cvec::Constant(N, 2.0), b) - cvec::Ones(N)).cwiseAbs().maxCoeff() == 0.0);
    cvec z = b;
    z[3] = 0.0;
    CHECK(retract(z, jb)[3] == jb[3]);
    for (double mu : {1e-3, 1e-4, 1e-6})
        CHECK((retract(b - mu * t, b) - b).norm() <= mu * t.norm() * (1.0 + 1e-9));
}

TEST_CASE("armijo step")
{
    const LayerPlan p = plan_for(64);
    const LayerTarget t = ideal_target(3, p);
    Rng rng(6);
    const cvec b = random_phases(p.n_bs, rng);
    const Eigen::MatrixXd psi = phase_update(b, t);
    ArmijoParams ap;
    ap.mu0 = 1.0 / largest_eigenvalue(t);

    const ArmijoResult idle = armijo_step(b, cvec::Zero(p.n_bs), t, psi, ap);
    CHECK(idle.mu == 0.0);
    CHECK(idle.converged);

    const cvec g = riemannian_gradient(b, euclidean_gradient(b, psi, t));
    const ArmijoResult r = armijo_step(b, g, t, psi, ap);
    REQUIRE_FALSE(r.converged);
    CHECK(r.mu > 0.0);
    CHECK(r.objective <= objective(b, psi, t) - ap.sigma * r.mu * g.squaredNorm());
    CHECK(unit_modulus_error(r.next) < 1e-12);

    // ascent direction: no acceptable step
    const ArmijoResult up = armijo_step(b, -g, t, psi, ap);
    CHECK(up.converged);
    CHECK(up.mu == 0.0);
    CHECK(up.next == b);
}

TEST_CASE("armijo step on a single-slope toy target")
{
    // one slope row, one nonzero target cell: a plain quadratic over the circle manifold
    LayerTarget t;
    t.layer = 1;
    t.n_bs = 16;
    t.p = {0};
    t.k_values = {0.0};
    t.r = Eigen::MatrixXd::Zero(1, 16);
    t.r(0, 8) = 4.0;
    t.phi = Eigen::MatrixXd::Ones(1, 16);
    Rng rng(12);
    cvec b = random_phases(16, rng);
    ArmijoParams ap;
    ap.mu0 = 1.0 / largest_eigenvalue(t);
    int worst = 0;
    for (int it = 0; it < 20; ++it)
    {
        const Eigen::MatrixXd psi = phase_update(b, t);
        const cvec g = riemannian_gradient(b, euclidean_gradient(b, psi, t));
        const ArmijoResult r = armijo_step(b, g, t, psi, ap);
        if (r.converged)
            break;
        worst = std::max(worst, r.backtracks);
        b = r.next;
    }
    CHECK(worst <= 3);
}

TEST_CASE("power iteration bound")
{
    const LayerPlan p = plan_for(32);
    const LayerTarget t = ideal_target(2, p);
    const Eigen::MatrixXcd A = t.dense();
    Eigen::VectorXd w2(A.cols());
    for (Eigen::Index p_ = 0; p_ < t.phi.rows(); ++p_)
        for (Eigen::Index q = 0; q < t.phi.cols(); ++q)
            w2[p_ + t.phi.rows() * q] = t.phi(p_, q) * t.phi(p_, q);
    const Eigen::MatrixXcd H = A * w2.asDiagonal() * A.adjoint();
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H).eigenvalues().maxCoeff();
    const double est = largest_eigenvalue(t, 200);
    CHECK(est <= top * (1.0 + 1e-9));
    CHECK(est == Approx(top).epsilon(1e-3));
}

TEST_CASE("layer enhancement descends monotonically")
{
    const LayerPlan p = plan_for(64);
    EnhanceOptions opt;
    opt.iterations = 60;
    for (int l = 1; l <= p.L; ++l)
    {
        const EnhanceResult r = enhance_layer(l, p, opt);
        REQUIRE(!r.trace.empty());
        for (std::size_t i = 1; i < r.trace.size(); ++i)
            CHECK(r.trace[i].objective <= r.trace[i - 1].objective + 1e-10);
        CHECK(r.final_objective <= r.trace.back().objective + 1e-10);
        CHECK(r.final_objective < r.trace.front().objective);
        CHECK(unit_modulus_error(r.basis) < 1e-12);
    }

    // a single iteration never increases the objective
    opt.iterations = 1;
    const EnhanceResult one = enhance_layer(2, p, opt);
    CHECK(one.final_objective <= one.trace.front().objective);

    opt.iterations = 0;
    CHECK_THROWS_AS(enhance_layer(1, p, opt), std::invalid_argument);
}

TEST_CASE("the all-ones start is stationary; the perturbed start is not")
{
    const LayerPlan p = plan_for(64);
    const LayerTarget t = ideal_target(2, p);
    const cvec ones = cvec::Ones(p.n_bs);
    const cvec g0 = riemannian_gradient(ones, euclidean_gradient(ones, phase_update(ones, t), t));
    CHECK(g0.norm() < 1e-9);

    EnhanceOptions opt;
    const cvec b = initial_basis(p.n_bs, 2, opt);
    const cvec g1 = riemannian_gradient(b, euclidean_gradient(b, phase_update(b, t), t));
    CHECK(g1.norm() > 1e-3);
    CHECK(initial_basis(p.n_bs, 2, opt) == b);
    opt.init_perturbation = 0.0;
    CHECK(initial_basis(p.n_bs, 2, opt) == ones);
}

TEST_CASE("modulated codebook")
{
    const LayerPlan p = plan_for(64);
    const HierarchicalCodebook chirp = build_chirp_codebook(p);
    const HierarchicalCodebook same = modulated_codebook(std::vector<cvec>(std::size_t(p.L), cvec::Ones(p.n_bs)), chirp);
    CHECK(same.kind == CodebookKind::Enhanced);
    for (int l = 1; l <= p.L; ++l)
        for (std::size_t i = 0; i < chirp.layer(l).codewords.size(); i += 5)
            CHECK((same.codeword_vector(l, int(i)) - chirp.codeword_vector(l, int(i))).cwiseAbs().maxCoeff() < 1e-15);

    EnhanceOptions opt;
    opt.iterations = 10;
    std::vector<EnhanceResult> res;
    const HierarchicalCodebook enh = enhance_codebook(chirp, opt, &res);
    REQUIRE(int(res.size()) == p.L);
    for (int l = 1; l <= p.L; ++l)
    {
        const auto &layer = enh.layer(l);
        CHECK(layer.basis == res[std::size_t(l - 1)].basis);
        CHECK(layer.codewords.size() == chirp.layer(l).codewords.size());
        for (std::size_t i = 0; i < layer.codewords.size(); i += 3)
        {
            const cvec v = enh.codeword_vector(l, int(i));
            CHECK(unit_modulus_error(v) < 1e-12);
            const KbPoint c = layer.codewords[i].coord;
            CHECK((v - rotate_codeword(layer.basis, c.k, c.b)).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(layer.codewords[i].parent == chirp.layer(l).codewords[i].parent);
        }
    }
    // deterministic regardless of layer scheduling
    const HierarchicalCodebook again = enhance_codebook(chirp, opt);
    for (int l = 1; l <= p.L; ++l)
        CHECK(again.layer(l).basis == enh.layer(l).basis);

    CHECK_THROWS_AS(modulated_codebook({cvec::Ones(p.n_bs)}, chirp), std::invalid_argument);
}
