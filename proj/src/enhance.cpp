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
#include "nfbeam/kernels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nfbeam
{
    std::string to_string(Weighting w)
    {
        return w == Weighting::Uniform ? "uniform" : "side";
    }

    Weighting weighting_from_string(const std::string &s)
    {
        if (s == "uniform")
            return Weighting::Uniform;
        if (s == "side" || s == "side_weighted")
            return Weighting::SideWeighted;
        throw std::invalid_argument("unknown weighting '" + s + "'");
    }

    std::string to_string(TargetSupport s)
    {
        return s == TargetSupport::SlopeWidth ? "slope_width" : "power_consistent";
    }

    TargetSupport support_from_string(const std::string &s)
    {
        if (s == "slope_width")
            return TargetSupport::SlopeWidth;
        if (s == "power_consistent")
            return TargetSupport::PowerConsistent;
        throw std::invalid_argument("unknown target support '" + s + "'");
    }

    Eigen::MatrixXcd LayerTarget::adjoint(const cvec &b) const
    {
        return kernels::steering_adjoint(b, k_values);
    }

    cvec LayerTarget::apply(const Eigen::MatrixXcd &z) const
    {
        return kernels::steering_apply(z, k_values);
    }

    Eigen::MatrixXcd LayerTarget::dense() const
    {
        const Eigen::Index P = Eigen::Index(k_values.size());
        Eigen::MatrixXcd A(n_bs, P * n_bs);
        const double s = 1.0 / std::sqrt(double(n_bs));
        for (Eigen::Index p = 0; p < P; ++p)
            for (int q = 0; q < n_bs; ++q) // column order matches vec() of a P x N matrix
                A.col(p + P * q) = approx_steering(KbPoint{k_values[std::size_t(p)], -1.0 + 2.0 * q / double(n_bs)}, n_bs) * s;
        return A;
    }

    LayerTarget ideal_target(int layer, const LayerPlan &plan, Weighting weighting, TargetSupport support)
    {
        if (layer < 1 || layer > plan.L)
            throw std::invalid_argument("ideal_target: layer out of range");
        const int N = plan.n_bs;
        const int Lk = 1 << (plan.L - layer + 1);
        LayerTarget t;
        t.layer = layer;
        t.n_bs = N;
        for (int p = 1 - Lk; p <= Lk - 1; ++p)
        {
            t.p.push_back(p);
            t.k_values.push_back(double(p) * plan.delta_k);
        }
        const Eigen::Index P = Eigen::Index(t.p.size());
        t.r = Eigen::MatrixXd::Zero(P, N);
        t.phi = Eigen::MatrixXd::Ones(P, N);
        for (Eigen::Index i = 0; i < P; ++i)
        {
            const int ap = std::abs(t.p[std::size_t(i)]);
            const double width = support == TargetSupport::SlopeWidth
                                     ? double(N) * std::abs(t.k_values[std::size_t(i)])
                                     : 0.5 * (std::abs(t.k_values[std::size_t(i)]) * N + 2.0 / N);
            int count = 0;
            for (int q = 0; q < N; ++q)
                if (std::abs(-1.0 + 2.0 * q / double(N)) <= width + 1e-12)
                    ++count;
            const double level = support == TargetSupport::SlopeWidth ? std::sqrt(double(N) / double(ap + 1))
                                                                      : std::sqrt(double(N) / double(count));
            for (int q = 0; q < N; ++q)
                if (std::abs(-1.0 + 2.0 * q / double(N)) <= width + 1e-12)
                    t.r(i, q) = level;
            if (weighting == Weighting::SideWeighted)
                t.phi.row(i).setConstant(double(ap + 1));
        }
        return t;
    }

    Eigen::MatrixXd phase_update(const cvec &b, const LayerTarget &target)
    {
        const Eigen::MatrixXcd z = target.adjoint(b);
        Eigen::MatrixXd psi(z.rows(), z.cols());
        for (Eigen::Index i = 0; i < z.size(); ++i)
            psi(i) = z(i) == cplx(0.0) ? 0.0 : std::arg(z(i));
        return psi;
    }

    namespace
    {
        double objective_from(const Eigen::MatrixXcd &z, const Eigen::MatrixXd &psi, const LayerTarget &t)
        {
            double f = 0.0;
            for (Eigen::Index i = 0; i < z.size(); ++i)
            {
                const double w = t.phi(i) * t.phi(i);
                f += w * std::norm(std::polar(t.r(i), psi(i)) - z(i));
            }
            return f;
        }
    }

    double objective(const cvec &b, const Eigen::MatrixXd &psi, const LayerTarget &target)
    {
        return objective_from(target.adjoint(b), psi, target);
    }

    cvec euclidean_gradient(const cvec &b, const Eigen::MatrixXd &psi, const LayerTarget &target)
    {
        Eigen::MatrixXcd z = target.adjoint(b);
        for (Eigen::Index i = 0; i < z.size(); ++i)
            z(i) = target.phi(i) * target.phi(i) * (z(i) - std::polar(target.r(i), psi(i)));
        return target.apply(z);
    }

    cvec riemannian_gradient(const cvec &b, const cvec &egrad)
    {
        cvec t(b.size());
        for (Eigen::Index n = 0; n < b.size(); ++n)
            t[n] = egrad[n] - std::real(egrad[n] * std::conj(b[n])) * b[n];
        return t;
    }

    cvec retract(const cvec &b_bar, const cvec &previous)
    {
        cvec out(b_bar.size());
        for (Eigen::Index n = 0; n < b_bar.size(); ++n)
        {
            const double m = std::abs(b_bar[n]);
            out[n] = m < 1e-14 ? previous[n] : b_bar[n] / m;
        }
        return out;
    }

    ArmijoResult armijo_step(const cvec &b, const cvec &tangent, const LayerTarget &target,
                             const Eigen::MatrixXd &psi, const ArmijoParams &params)
    {
        ArmijoResult res;
        res.next = b;
        res.objective = objective(b, psi, target);
        const double nt = tangent.squaredNorm();
        if (std::sqrt(nt) < 1e-12)
        {
            res.converged = true;
            return res;
        }
        double mu = params.mu0;
        for (int m = 0; m <= params.max_backtracks; ++m, mu *= params.rho)
        {
            cvec cand = retract(b - mu * tangent, b);
            const double f1 = objective(cand, psi, target);
            if (f1 <= res.objective - params.sigma * mu * nt)
            {
                res.mu = mu;
                res.objective = f1;
                res.backtracks = m;
                res.next = std::move(cand);
                return res;
            }
        }
        res.converged = true;
        res.backtracks = params.max_backtracks;
        return res;
    }

    double largest_eigenvalue(const LayerTarget &target, int iterations, std::uint64_t seed)
    {
        Rng rng(seed);
        std::normal_distribution<double> nd;
        cvec v(target.n_bs);
        for (Eigen::Index n = 0; n < v.size(); ++n)
            v[n] = nd(rng);
        v.normalize();
        double lambda = 0.0;
        const Eigen::MatrixXd w2 = target.phi.cwiseProduct(target.phi);
        for (int it = 0; it < iterations; ++it)
        {
            Eigen::MatrixXcd z = target.adjoint(v);
            z.array() *= w2.array().cast<cplx>();
            v = target.apply(z);
            lambda = v.norm();
            v /= lambda;
        }
        return lambda;
    }

    cvec initial_basis(int n_bs, int layer, const EnhanceOptions &opt)
    {
        cvec b = cvec::Ones(n_bs);
        if (opt.init_perturbation > 0.0)
        {
            Rng rng(derive_seed(opt.seed, std::uint64_t(layer)));
            std::normal_distribution<double> nd;
            for (int n = 0; n < n_bs; ++n)
                b[n] = std::polar(1.0, opt.init_perturbation * nd(rng));
        }
        return b;
    }

    EnhanceResult enhance_layer(int layer, const LayerPlan &plan, const EnhanceOptions &opt)
    {
        if (opt.iterations < 1)
            throw std::invalid_argument("enhance_layer: at least one iteration required");
        if (opt.inner_steps < 1)
            throw std::invalid_argument("enhance_layer: inner_steps must be >= 1");

        const LayerTarget target = ideal_target(layer, plan, opt.weighting, opt.support);
        ArmijoParams ap = opt.armijo;
        ap.mu0 = 1.0 / largest_eigenvalue(target);
        const double tol = opt.tol_factor * double(plan.n_bs);

        EnhanceResult res;
        res.layer = layer;
        cvec b = initial_basis(plan.n_bs, layer, opt);
        for (int t = 1; t <= opt.iterations; ++t)
        {
            const Eigen::MatrixXd psi = phase_update(b, target);
            const double f = objective(b, psi, target);
            cvec grad = riemannian_gradient(b, euclidean_gradient(b, psi, target));
            const double gnorm = grad.norm();
            TraceEntry e{layer, t, f, gnorm, 0.0};
            if (gnorm < tol)
            {
                res.trace.push_back(e);
                res.converged = true;
                break;
            }
            bool stalled = false;
            for (int s = 0; s < opt.inner_steps; ++s)
            {
                if (s > 0)
                    grad = riemannian_gradient(b, euclidean_gradient(b, psi, target));
                const ArmijoResult step = armijo_step(b, grad, target, psi, ap);
                if (step.converged)
                {
                    stalled = true;
                    break;
                }
                if (s == 0)
                    e.step = step.mu;
                b = step.next;
            }
            res.trace.push_back(e);
            if (stalled)
            {
                res.converged = true;
                break;
            }
        }
        res.basis = b;
        res.final_objective = objective(b, phase_update(b, target), target);
        return res;
    }

    HierarchicalCodebook modulated_codebook(const std::vector<cvec> &bases, const HierarchicalCodebook &chirp)
    {
        if (int(bases.size()) != chirp.n_layers())
            throw std::invalid_argument("modulated_codebook: one basis per layer required");
        HierarchicalCodebook out = chirp;
        out.kind = CodebookKind::Enhanced;
        for (std::size_t l = 0; l < bases.size(); ++l)
        {
            if (bases[l].size() != chirp.n_bs())
                throw std::invalid_argument("modulated_codebook: basis length mismatch");
            out.layers[l].basis = bases[l];
        }
        return out;
    }

    HierarchicalCodebook enhance_codebook(const HierarchicalCodebook &chirp, const EnhanceOptions &opt,
                                          std::vector<EnhanceResult> *results)
    {
        const int L = chirp.n_layers();
        if (opt.iterations < 1 || opt.inner_steps < 1)
            throw std::invalid_argument("enhance_codebook: iterations and inner_steps must be >= 1");
        std::vector<EnhanceResult> res(static_cast<std::size_t>(L));
#pragma omp parallel for schedule(dynamic, 1)
        for (int l = 1; l <= L; ++l)
            res[std::size_t(l - 1)] = enhance_layer(l, chirp.plan, opt);

        std::vector<cvec> bases;
        for (const auto &r : res)
            bases.push_back(r.basis);
        if (results)
            *results = std::move(res);
        return modulated_codebook(bases, chirp);
    }
}
