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

#ifndef nfbeam_kernels_H
#define nfbeam_kernels_H

#include "nfbeam/geometry.hpp"

#include <vector>

namespace nfbeam
{
    // Cells of a label grid are won by a later beam only if it beats the incumbent by this
    // margin (in gain units relative to sqrt(N)); near-ties go to the lower beam index.
    inline constexpr double label_tie_tolerance = 1e-9;

    struct LabelResult
    {
        Eigen::MatrixXi labels; // rows: k samples, cols: b samples
        Eigen::MatrixXd best;   // winning gain per cell
    };

    // OpenMP kernels. All of them are deterministic and independent of the thread count.
    namespace kernels
    {
        // out(r, q) = |w_hat^H a(k_r, b_q)|, w_hat = w / ||w||, b_q = -1 + 2q/M, a unit-modulus
        Eigen::MatrixXd gain_rows(const cvec &w, const std::vector<double> &k_values, int M);

        // Gain of the basis at slope offsets j*dk (j = -(n_rows-1) .. n_rows-1, row j + n_rows - 1)
        // and intercept offsets -1 + t/M (t = 0 .. 2M-1)
        Eigen::MatrixXd offset_table(const cvec &basis, double dk, int n_rows, int M);

        // Argmax labels over beams basis * a(coord) on the grid k_r = r*dk, b_q = -1 + 2q/M.
        // Beam slopes must be integer multiples of dk and intercepts multiples of 1/M.
        LabelResult dominant_labels(const cvec &basis, const std::vector<KbPoint> &beams, double dk, int n_rows, int M);

        // z(p, q) = a_hat(k_p, b_q)^H x over the N-point intercept lattice, a_hat = a / sqrt(N)
        Eigen::MatrixXcd steering_adjoint(const cvec &x, const std::vector<double> &k_values);

        // sum_{p,q} a_hat(k_p, b_q) z(p, q)
        cvec steering_apply(const Eigen::MatrixXcd &z, const std::vector<double> &k_values);

        // y(p, q) = a(k_p, b_q)^H h / sqrt(N), i.e. the noiseless receive amplitude of every
        // lattice codeword used as beamformer conj(a)
        Eigen::MatrixXcd lattice_response(const cvec &h, const std::vector<double> &k_values);
    }

    // Serial direct-summation references with identical contracts
    namespace reference
    {
        Eigen::MatrixXd gain_rows(const cvec &w, const std::vector<double> &k_values, int M);
        LabelResult dominant_labels(const cvec &basis, const std::vector<KbPoint> &beams, double dk, int n_rows, int M);
        Eigen::MatrixXcd steering_adjoint(const cvec &x, const std::vector<double> &k_values);
        cvec steering_apply(const Eigen::MatrixXcd &z, const std::vector<double> &k_values);
        Eigen::MatrixXcd lattice_response(const cvec &h, const std::vector<double> &k_values);
    }
}

#endif
