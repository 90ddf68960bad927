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

#include "nfbeam/training.hpp"
#include "nfbeam/kernels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nfbeam
{
    double MeasurementModel::noise_power() const
    {
        return std::pow(10.0, -snr_db / 10.0);
    }

    std::string to_string(RateNormalization r)
    {
        return r == RateNormalization::PerAntenna ? "per_antenna" : "array_gain";
    }

    RateNormalization rate_from_string(const std::string &s)
    {
        if (s == "per_antenna")
            return RateNormalization::PerAntenna;
        if (s == "array_gain")
            return RateNormalization::ArrayGain;
        throw std::invalid_argument("unknown rate normalization '" + s + "'");
    }

    namespace
    {
        cplx noise_sample(Rng &rng, double sigma)
        {
            std::normal_distribution<double> nd;
            const double re = nd(rng);
            const double im = nd(rng);
            return cplx(re, im) * (sigma * std::sqrt(0.5));
        }

        double noisy_power(cplx y, const MeasurementModel &model, Rng &rng)
        {
            return std::norm(y + noise_sample(rng, std::sqrt(model.noise_power())));
        }

        cplx amplitude(const Channel &h, const cvec &f)
        {
            return (h.vector.array() * f.array()).sum() / std::sqrt(double(f.size()));
        }
    }

    double measure(const Channel &h, const cvec &f, const MeasurementModel &model, Rng &rng)
    {
        if (h.vector.size() != f.size())
            throw std::invalid_argument("measure: length mismatch");
        return noisy_power(amplitude(h, f), model, rng);
    }

    double beamforming_gain(const Channel &h, const cvec &f)
    {
        if (h.vector.size() != f.size())
            throw std::invalid_argument("beamforming_gain: length mismatch");
        return std::norm(amplitude(h, f));
    }

    cvec perfect_csi_beamformer(const Channel &h)
    {
        cvec f(h.vector.size());
        for (Eigen::Index n = 0; n < f.size(); ++n)
            f[n] = h.vector[n] == cplx(0.0) ? cplx(1.0) : std::conj(h.vector[n]) / std::abs(h.vector[n]);
        return f;
    }

    double sum_rate(double gain, double snr_db, int n_bs, RateNormalization norm)
    {
        const double snr = std::pow(10.0, snr_db / 10.0);
        const double g = norm == RateNormalization::PerAntenna ? gain / double(n_bs) : gain;
        return std::log2(1.0 + g * snr);
    }

    double sum_rate(const Channel &h, const cvec &f, double snr_db, RateNormalization norm)
    {
        return sum_rate(beamforming_gain(h, f), snr_db, int(f.size()), norm);
    }

    TrainingResult hierarchical_search(const HierarchicalCodebook &book, const Channel &h, const MeasurementModel &model, Rng &rng)
    {
        if (book.n_layers() < 1 || book.layer(1).codewords.empty())
            throw std::invalid_argument("hierarchical_search: empty codebook");
        if (h.vector.size() != book.n_bs())
            throw std::invalid_argument("hierarchical_search: channel length does not match the codebook");

        TrainingResult res;
        res.capture = TrainingResult::Capture::Triangle;

        // Top layer: sweep everything
        LayerDecision top;
        top.layer = 1;
        const auto &first = book.layer(1).codewords;
        for (std::size_t i = 0; i < first.size(); ++i)
        {
            const double pw = measure(h, beamformer_of(book.codeword_vector(1, int(i))), model, rng);
            top.candidates.push_back(int(i));
            top.powers.push_back(pw);
            if (top.winner < 0 || pw > top.powers[std::size_t(top.winner)])
                top.winner = int(i);
        }
        top.new_measurements = int(first.size());
        int incumbent = top.candidates[std::size_t(top.winner)];
        double incumbent_power = top.powers[std::size_t(top.winner)];
        top.winner = incumbent;
        top.gain = beamforming_gain(h, beamformer_of(book.codeword_vector(1, incumbent)));
        res.per_layer.push_back(top);
        res.measurements = top.new_measurements;

        int layer = 1;
        for (int l = 2; l <= book.n_layers(); ++l)
        {
            const Codeword &parent = book.codeword(l - 1, incumbent);
            LayerDecision dec;
            dec.layer = l;
            int best = -1;
            double best_power = 0.0;
            for (int c : parent.children)
            {
                if (c < 0)
                    continue;
                const Codeword &cw = book.codeword(l, c);
                double pw;
                const bool same_point = cw.coord.k == parent.coord.k && cw.coord.b == parent.coord.b;
                if (book.kind == CodebookKind::SpatialChirp && same_point)
                    pw = incumbent_power; // identical vector, reuse the previous pilot
                else
                {
                    pw = measure(h, beamformer_of(book.codeword_vector(l, c)), model, rng);
                    ++dec.new_measurements;
                }
                dec.candidates.push_back(c);
                dec.powers.push_back(pw);
                if (best < 0 || pw > best_power)
                {
                    best = c;
                    best_power = pw;
                }
            }
            if (best < 0)
                break; // pruned branch, keep the parent
            dec.winner = best;
            dec.gain = beamforming_gain(h, beamformer_of(book.codeword_vector(l, best)));
            res.measurements += dec.new_measurements;
            res.per_layer.push_back(dec);
            incumbent = best;
            incumbent_power = best_power;
            layer = l;
        }

        const Codeword &win = book.codeword(layer, incumbent);
        res.chosen = win.coord;
        res.chosen_layer = layer;
        res.chosen_index = incumbent;
        res.region = win.region;
        res.beamformer = beamformer_of(book.codeword_vector(layer, incumbent));
        res.gain = res.per_layer.back().gain;
        return res;
    }

    TrainingResult exhaustive_search(const FlatCodebook &book, const Channel &h, const MeasurementModel &model, Rng &rng)
    {
        if (book.size() == 0)
            throw std::invalid_argument("exhaustive_search: empty codebook");
        if (h.vector.size() != book.n_bs)
            throw std::invalid_argument("exhaustive_search: channel length does not match the codebook");

        std::vector<double> ks(std::size_t(book.n_k));
        for (int p = 0; p < book.n_k; ++p)
            ks[std::size_t(p)] = double(p) * book.delta_k;
        const Eigen::MatrixXcd y = kernels::lattice_response(h.vector, ks);

        long best = -1;
        double best_power = 0.0;
        for (std::size_t i = 0; i < book.size(); ++i)
        {
            const Eigen::Index p = Eigen::Index(i / std::size_t(book.n_bs)), q = Eigen::Index(i % std::size_t(book.n_bs));
            const double pw = noisy_power(y(p, q), model, rng);
            if (best < 0 || pw > best_power)
            {
                best = long(i);
                best_power = pw;
            }
        }

        TrainingResult res;
        res.capture = TrainingResult::Capture::Lattice;
        res.lattice = book;
        res.chosen_index = best;
        res.chosen = book.coord(std::size_t(best));
        res.chosen_layer = 1;
        res.measurements = int(book.size());
        res.beamformer = beamformer_of(book.vector(std::size_t(best)));
        res.gain = beamforming_gain(h, res.beamformer);
        return res;
    }

    TrainingResult perfect_csi(const Channel &h)
    {
        TrainingResult res;
        res.capture = TrainingResult::Capture::None;
        res.beamformer = perfect_csi_beamformer(h);
        res.gain = beamforming_gain(h, res.beamformer);
        res.success = true;
        return res;
    }

    bool success(const TrainingResult &result, const Channel &h, const LayerPlan &plan, const ArrayConfig &cfg)
    {
        (void)plan;
        const KbPoint los = to_kb(h.theta0, h.r0, cfg);
        switch (result.capture)
        {
        case TrainingResult::Capture::None:
            return true;
        case TrainingResult::Capture::Triangle:
            if (result.region.contains(los, 1e-12))
                return true;
            break;
        case TrainingResult::Capture::Lattice:
            if (long(result.lattice.nearest(los)) == result.chosen_index)
                return true;
            break;
        }
        const double bound = beamforming_gain(h, perfect_csi_beamformer(h));
        return result.gain >= success_gain_fraction * bound;
    }
}
