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

#ifndef nfbeam_codebook_H
#define nfbeam_codebook_H

#include "nfbeam/geometry.hpp"

#include <array>
#include <string>
#include <vector>

namespace nfbeam
{
    // Derived layout of the k-b hierarchy.
    // The slope grid is fixed at delta_k = 2/N^2 and the span is rounded up to L_k1 = 2^(L-1)
    // slope steps, so k_max >= L_k1_rounded * delta_k (the rounding itself may go either way).
    struct LayerPlan
    {
        int n_bs = 0;
        double r_min_plan = 0.0;     // Planning distance [m]
        double k_max_required = 0.0; // lambda / (4 r_min_plan)
        double k_max = 0.0;          // Effective span L_k1 * delta_k
        double B_max = 0.0;          // k_max * N, top-layer triangle side
        double B_min = 0.0;          // 2 / N
        double delta_k = 0.0;        // 2 / N^2
        int L_k1_rounded = 0;        // round(B_max_required / B_min)
        int L_k1 = 0;                // 2^(L-1)
        int L = 0;                   // Number of layers, top layer counted
        int N1 = 0;                  // Top-layer size

        double height(int layer) const; // Triangle height (k-axis) on a layer
        double side(int layer) const;   // Triangle side (b-axis) on a layer
        int pilots_enhanced() const { return N1 + 4 * (L - 1); }
        int pilots_chirp() const { return N1 + 3 * (L - 1); }
    };

    LayerPlan layer_plan(const ArrayConfig &cfg, double r_min_plan);

    // Which k-column carries the base of a triangle. A codeword sits at the apex, where its
    // chirp beam is narrowest; the k = 0 column of the top layer uses BaseAtHighK.
    enum class Orientation
    {
        BaseAtHighK = 1,
        BaseAtLowK = -1
    };

    std::string to_string(Orientation o);
    Orientation orientation_from_string(const std::string &s);

    struct TriangleRegion
    {
        Orientation orientation = Orientation::BaseAtHighK;
        KbPoint apex;
        double height = 0.0;
        double side = 0.0;

        // Apex followed by the two base corners; intercepts are not wrapped
        std::array<KbPoint, 3> vertices() const;
        double area() const { return 0.5 * side * height; }
        // Closed membership with tolerance, intercepts compared modulo 2
        bool contains(const KbPoint &q, double tol = 1e-12) const;
        // Four congruent sub-triangles: {own, left, right, flipped middle}
        std::array<TriangleRegion, 4> subdivide() const;
    };

    struct Codeword
    {
        KbPoint coord;
        int layer = 1;
        Orientation orientation = Orientation::BaseAtHighK;
        TriangleRegion region;
        int beam = -1;                          // Distinct-beam index inside the layer
        int parent = -1;                        // Index in layer - 1
        std::array<int, 4> children{-1, -1, -1, -1}; // Indices in layer + 1, -1 if absent
    };

    // Codewords sharing a coordinate share one beamforming vector
    struct Beam
    {
        KbPoint coord;
        std::vector<int> members;
    };

    struct CodebookLayer
    {
        std::vector<Codeword> codewords;
        std::vector<Beam> beams; // Sorted by (k, b)
        cvec basis;              // Layer basis at (0, 0); all-ones for the chirp book
    };

    enum class CodebookKind
    {
        SpatialChirp,
        Enhanced
    };

    std::string to_string(CodebookKind kind);

    class HierarchicalCodebook
    {
    public:
        LayerPlan plan;
        CodebookKind kind = CodebookKind::SpatialChirp;
        std::vector<CodebookLayer> layers; // layers[0] is layer 1

        int n_bs() const { return plan.n_bs; }
        int n_layers() const { return int(layers.size()); }
        const CodebookLayer &layer(int l) const; // 1-based
        const Codeword &codeword(int l, int i) const { return layer(l).codewords.at(i); }

        SteeringVector codeword_vector(int l, int i) const;
        SteeringVector beam_vector(int l, int beam) const;
        std::size_t size() const;
    };

    // Group codewords of a layer into distinct beams and fill Codeword::beam
    void index_beams(CodebookLayer &layer, const LayerPlan &plan);

    std::vector<Codeword> top_layer_codebook(const LayerPlan &plan);
    // Coordinates of the three children (side midpoints), same order as subdivide()[1..3]
    std::array<KbPoint, 3> child_codewords(const Codeword &parent, const LayerPlan &plan);
    // Full chirp hierarchy; children of entry i in layer l are 4i..4i+3 in layer l+1
    HierarchicalCodebook build_chirp_codebook(const LayerPlan &plan);

    SteeringVector codeword_vector(const KbPoint &p, const ArrayConfig &cfg);
    // base_n * exp(-j pi (db n + dk n^2))
    SteeringVector rotate_codeword(const SteeringVector &base, double dk, double db);

    // Rectangular lattice of chirp beams: n_k slope columns times N intercepts.
    // Entry index = p * N + q for slope p * delta_k and intercept -1 + 2q/N.
    struct FlatCodebook
    {
        int n_bs = 0;
        int n_k = 0;
        double delta_k = 0.0;
        std::string name;

        std::size_t size() const { return std::size_t(n_k) * std::size_t(n_bs); }
        KbPoint coord(std::size_t i) const;
        SteeringVector vector(std::size_t i) const;
        // Nearest lattice entry (slope clamped to the available columns)
        std::size_t nearest(const KbPoint &p) const;
    };

    FlatCodebook elementary_codebook(const LayerPlan &plan);
    FlatCodebook dft_codebook(const ArrayConfig &cfg);

    // Feasible-domain test: does the closed triangle reach below k = lambda (1 - b^2) / (4 r)?
    bool region_feasible(const TriangleRegion &t, double lambda, double r_min_serve);

    // Drop codewords whose ideal region lies entirely outside the physical domain of
    // distances >= r_min_serve. Hierarchy links are re-indexed.
    HierarchicalCodebook prune_codebook(const HierarchicalCodebook &book, double r_min_serve, const ArrayConfig &cfg);
}

#endif
