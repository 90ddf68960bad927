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

#ifndef nfbeam_pattern_H
#define nfbeam_pattern_H

#include "nfbeam/codebook.hpp"
#include "nfbeam/kernels.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nfbeam
{
    // Rectangular k-b sample grid: k_r = r * dk (r < n_rows), b_q = -1 + 2q / M (q < M)
    struct KbGrid
    {
        double dk = 0.0;
        int n_rows = 0;
        int M = 0;
        Eigen::MatrixXd values; // n_rows x M once filled

        double k(int r) const { return double(r) * dk; }
        double b(int q) const { return -1.0 + 2.0 * double(q) / double(M); }
        std::vector<double> k_values() const;

        // Bottom-layer lattice of a plan, optionally refined by an integer factor on both axes
        static KbGrid for_plan(const LayerPlan &plan, int oversample = 1);
    };

    double coherence(const cvec &w, const cvec &v);

    // |w_hat^H a(k_r, b_q)| with w scaled to unit norm; the matched point reads sqrt(N)
    KbGrid kb_gain_grid(const cvec &w, const KbGrid &grid);

    // sum_q |a_hat(k0, b_q)^H v|^2 over the N-point intercept lattice
    double column_power_check(double k0, const cvec &v);

    // Rectangular profile sqrt(N / B) with B = |k_c - k_q| N + 2/N, zero outside |b_q - b_c| <= B/2
    double ideal_gain(const KbPoint &center, const KbPoint &query, int n_bs);

    struct FresnelCS
    {
        double C;
        double S;
    };
    FresnelCS fresnel_integrals(double X);

    // Stationary-phase amplitude of the chirp (k, b) seen from direction theta0
    double psp_gain(double theta0, const KbPoint &p, int n_bs);

    // How grid cells on shared triangle edges are attributed to ideal regions
    enum class EdgeRule
    {
        Partition, // to the beam with the lowest (k, b) coordinate
        Closed     // to every beam whose closed region contains the cell
    };

    // Realistic dominant region of every distinct beam of a layer
    LabelResult dominant_region(const HierarchicalCodebook &book, int layer, const KbGrid &grid);
    // Same for an arbitrary codeword list (direct FFT evaluation, no rotation structure needed)
    LabelResult dominant_region(const std::vector<cvec> &codewords, const KbGrid &grid);

    // Boolean mask (n_rows x M) of the ideal cells of one beam
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> ideal_mask(const HierarchicalCodebook &book, int layer, int beam,
                                                                 const KbGrid &grid, EdgeRule rule = EdgeRule::Closed);

    // Fraction of the realistic dominant cells of a beam that fall inside its ideal region.
    // Throws std::domain_error when the beam dominates no cell.
    double overlap_metric(const HierarchicalCodebook &book, int layer, int beam, const LabelResult &labels,
                          const KbGrid &grid, EdgeRule rule = EdgeRule::Closed);

    struct LayerOverlap
    {
        int layer = 0;
        double mean = 0.0;  // over beams with a nonempty realistic region
        int beams = 0;
        int degenerate = 0; // beams without any dominant cell
        std::vector<double> per_beam; // NaN for degenerate beams
    };

    LayerOverlap layer_overlap(const HierarchicalCodebook &book, int layer, const KbGrid &grid, EdgeRule rule = EdgeRule::Closed);
    std::vector<LayerOverlap> overlap_summary(const HierarchicalCodebook &book, int oversample = 1, EdgeRule rule = EdgeRule::Closed);
    double overlap_mean(const std::vector<LayerOverlap> &summary); // mean of the per-layer means

    // CSV: header row of b samples, first column k samples, values in scientific notation
    void export_grid_csv(const KbGrid &grid, const std::string &path);
    std::string grid_csv(const KbGrid &grid);
}

#endif
