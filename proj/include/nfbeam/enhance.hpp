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

#ifndef nfbeam_enhance_H
#define nfbeam_enhance_H

#include "nfbeam/codebook.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nfbeam
{
    enum class Weighting
    {
        Uniform,
        SideWeighted // |p| + 1 ramp over slope offsets
    };

    // Support of the ideal coherence on a slope-offset column
    enum class TargetSupport
    {
        SlopeWidth,     // |b_q| <= N |k_p|, level sqrt(N / (|p| + 1))
        PowerConsistent // |b_q| <= (|k_p| N + 2/N) / 2, level set so each column carries power N
    };

    std::string to_string(Weighting w);
    Weighting weighting_from_string(const std::string &s);
    std::string to_string(TargetSupport s);
    TargetSupport support_from_string(const std::string &s);

    // Ideal pattern of one layer basis sampled at slopes k_p = p * delta_k and the N-point intercept
    // lattice. The steering matrix A is applied implicitly through FFTs (columns normalized).
    struct LayerTarget
    {
        int layer = 0;
        int n_bs = 0;
        std::vector<int> p;          // slope offsets 1 - L_k .. L_k - 1, L_k = 2^(L - l + 1)
        std::vector<double> k_values;
        Eigen::MatrixXd r;           // target gains, rows = slopes, cols = intercepts
        Eigen::MatrixXd phi;         // weights, same shape

        Eigen::Index columns() const { return r.size(); }
        Eigen::MatrixXcd adjoint(const cvec &b) const;     // A^H b
        cvec apply(const Eigen::MatrixXcd &z) const;        // A z
        Eigen::MatrixXcd dense() const;                     // explicit A, N x (P*N), for small checks
    };

    LayerTarget ideal_target(int layer, const LayerPlan &plan, Weighting weighting = Weighting::SideWeighted,
                             TargetSupport support = TargetSupport::SlopeWidth);

    // psi = angle(A^H b), angle(0) := 0
    Eigen::MatrixXd phase_update(const cvec &b, const LayerTarget &target);
    // sum phi^2 |r e^{j psi} - A^H b|^2
    double objective(const cvec &b, const Eigen::MatrixXd &psi, const LayerTarget &target);
    // A [phi^2 o (A^H b - r o e^{j psi})]; directional derivative along d is 2 Re(g^H d)
    cvec euclidean_gradient(const cvec &b, const Eigen::MatrixXd &psi, const LayerTarget &target);
    cvec riemannian_gradient(const cvec &b, const cvec &egrad);
    // Entrywise normalization; entries with modulus below 1e-14 fall back to the previous iterate
    cvec retract(const cvec &b_bar, const cvec &previous);

    struct ArmijoParams
    {
        double mu0 = 1.0;
        double rho = 0.5;
        double sigma = 1e-4;
        int max_backtracks = 50;
    };

    struct ArmijoResult
    {
        double mu = 0.0;
        double objective = 0.0; // objective at the accepted point (or the start point)
        int backtracks = 0;
        bool converged = false; // no acceptable step (or stationary start)
        cvec next;
    };

    ArmijoResult armijo_step(const cvec &b, const cvec &tangent, const LayerTarget &target,
                             const Eigen::MatrixXd &psi, const ArmijoParams &params);

    // Largest eigenvalue of A diag(phi^2) A^H by power iteration
    double largest_eigenvalue(const LayerTarget &target, int iterations = 20, std::uint64_t seed = 7);

    struct EnhanceOptions
    {
        int iterations = 200;          // outer iterations T
        double tol_factor = 1e-6;      // stop when ||grad|| < tol_factor * N
        int inner_steps = 1;           // manifold steps per phase update
        Weighting weighting = Weighting::SideWeighted;
        TargetSupport support = TargetSupport::SlopeWidth;
        // The all-ones start is an exact stationary point of the symmetric objective; a small
        // seeded phase perturbation (radians, std-dev) lets the descent leave it.
        double init_perturbation = 0.1;
        std::uint64_t seed = 20240611;
        ArmijoParams armijo;           // mu0 is replaced by 1 / largest_eigenvalue
    };

    struct TraceEntry
    {
        int layer;
        int iteration;
        double objective;     // after the phase update of this iteration
        double gradient_norm; // Riemannian gradient norm
        double step;          // accepted Armijo step (0 if none)
    };

    struct EnhanceResult
    {
        int layer = 0;
        cvec basis;
        std::vector<TraceEntry> trace;
        double final_objective = 0.0;
        bool converged = false;
    };

    cvec initial_basis(int n_bs, int layer, const EnhanceOptions &opt);
    EnhanceResult enhance_layer(int layer, const LayerPlan &plan, const EnhanceOptions &opt = {});

    // Replace every layer basis of the chirp book by the enhanced one
    HierarchicalCodebook modulated_codebook(const std::vector<cvec> &bases, const HierarchicalCodebook &chirp);

    // Enhance all layers (in parallel) and modulate; per-layer results are returned if requested
    HierarchicalCodebook enhance_codebook(const HierarchicalCodebook &chirp, const EnhanceOptions &opt = {},
                                          std::vector<EnhanceResult> *results = nullptr);
}

#endif
