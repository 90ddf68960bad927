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

#ifndef nfbeam_training_H
#define nfbeam_training_H

#include "nfbeam/codebook.hpp"

#include <string>
#include <vector>

namespace nfbeam
{
    // Unit pilot, power-normalized beamformer f / sqrt(N), noise CN(0, 10^(-snr/10)).
    // Noise is always drawn from two standard normals so that streams stay coupled across SNRs.
    struct MeasurementModel
    {
        double snr_db = 10.0;
        double noise_power() const;
    };

    // Rate reference. PerAntenna scales the beamforming gain by 1/N (array gain removed from the
    // SNR axis); ArrayGain uses the beamforming gain directly.
    enum class RateNormalization
    {
        PerAntenna,
        ArrayGain
    };

    std::string to_string(RateNormalization r);
    RateNormalization rate_from_string(const std::string &s);

    // A codeword w transmits through f = conj(w), so that h^T f = w^H h
    inline cvec beamformer_of(const cvec &codeword) { return codeword.conjugate(); }

    double measure(const Channel &h, const cvec &f, const MeasurementModel &model, Rng &rng);
    double beamforming_gain(const Channel &h, const cvec &f); // |h^T f / sqrt(N)|^2
    cvec perfect_csi_beamformer(const Channel &h);
    double sum_rate(double gain, double snr_db, int n_bs, RateNormalization norm = RateNormalization::PerAntenna);
    double sum_rate(const Channel &h, const cvec &f, double snr_db, RateNormalization norm = RateNormalization::PerAntenna);

    struct LayerDecision
    {
        int layer = 0;
        std::vector<int> candidates; // codeword indices in the layer
        std::vector<double> powers;  // measured (or reused) powers
        int winner = -1;
        double gain = 0.0;           // noiseless gain of the winner
        int new_measurements = 0;
    };

    struct TrainingResult
    {
        enum class Capture
        {
            Triangle, // hierarchical: the chosen region must hold the LoS point
            Lattice,  // flat: the chosen entry must be the nearest lattice entry
            None      // perfect CSI
        };

        KbPoint chosen;
        int chosen_layer = 0;
        long chosen_index = -1;
        Capture capture = Capture::None;
        TriangleRegion region;
        FlatCodebook lattice;
        std::vector<LayerDecision> per_layer;
        int measurements = 0;
        double gain = 0.0;
        bool success = false;
        cvec beamformer;
    };

    TrainingResult hierarchical_search(const HierarchicalCodebook &book, const Channel &h, const MeasurementModel &model, Rng &rng);
    TrainingResult exhaustive_search(const FlatCodebook &book, const Channel &h, const MeasurementModel &model, Rng &rng);
    TrainingResult perfect_csi(const Channel &h);

    // LoS captured, or gain at least 80% of the perfect-CSI gain (inclusive)
    bool success(const TrainingResult &result, const Channel &h, const LayerPlan &plan, const ArrayConfig &cfg);
    inline constexpr double success_gain_fraction = 0.8;
}

#endif
