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

#ifndef nfbeam_geometry_H
#define nfbeam_geometry_H

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace nfbeam
{
    using cplx = std::complex<double>;
    using cvec = Eigen::VectorXcd;
    using dvec = Eigen::VectorXd;

    // Phase-only beamformers and array responses are plain complex vectors. Unit-modulus
    // entries unless stated otherwise (see normalized()).
    using SteeringVector = cvec;

    inline constexpr double pi = 3.141592653589793238462643383279502884;

    // Random engine used everywhere. Streams are forked with derive_seed().
    using Rng = std::mt19937_64;
    inline constexpr const char *rng_name = "mt19937_64+splitmix64";

    // SplitMix64 mixing of a base seed with up to three stream identifiers
    std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

    // Circularly-symmetric complex normal sample with E|x|^2 = variance
    cplx complex_normal(Rng &rng, double variance = 1.0);

    struct ArrayConfig
    {
        int n_bs = 512;      // Number of antennas, even
        double f_c = 50e9;   // Carrier frequency in [Hz]
        double c = 3.0e8;    // Propagation speed in [m/s]

        ArrayConfig() = default;
        ArrayConfig(int n_bs, double f_c, double c = 3.0e8);

        double lambda() const { return c / f_c; }
        double spacing() const { return 0.5 * lambda(); } // Half-wavelength spacing
        double aperture() const { return spacing() * double(n_bs); }

        int index(int i) const { return i - n_bs / 2 + 1; } // Signed antenna index for storage slot i
        void validate() const;                               // Throws std::invalid_argument
    };

    // Slope / intercept coordinate of a near-field beam
    struct KbPoint
    {
        double k = 0.0;
        double b = 0.0;
    };

    // Angle and distance of a source; r = +inf for far-field points (k = 0)
    struct PolarPoint
    {
        double theta = 0.0;
        double r = 0.0;
    };

    struct Path
    {
        cplx gain;
        double theta;
        double r;
    };

    struct Channel
    {
        cplx los_gain = 1.0;
        double theta0 = 0.0;
        double r0 = 1.0;
        std::vector<Path> nlos;
        cvec vector;

        // Rebuild the channel vector from the stored path parameters
        cvec rebuild(const ArrayConfig &cfg) const;
    };

    // Wrap an intercept into [-1, 1)
    double wrap_intercept(double b);

    SteeringVector exact_steering(double theta0, double r0, const ArrayConfig &cfg);
    SteeringVector approx_steering(const KbPoint &p, const ArrayConfig &cfg);
    SteeringVector approx_steering(const KbPoint &p, int n_bs);

    // Scale to unit l2-norm
    cvec normalized(const cvec &v);

    KbPoint to_kb(double theta0, double r0, const ArrayConfig &cfg);
    PolarPoint from_kb(const KbPoint &p, const ArrayConfig &cfg);

    double fresnel_min_distance(const ArrayConfig &cfg);

    struct RayleighDistances
    {
        double classical;
        double effective;
    };
    inline constexpr double effective_rayleigh_fraction = 0.174; // Fraction of 2D^2/lambda where the far-field codebook takes over
    RayleighDistances rayleigh_distances(const ArrayConfig &cfg, double epsilon);

    struct ChannelDraw
    {
        double r_lo = 13.0;      // Lower bound of scatterer distances [m]
        double r_hi = 150.0;     // Upper bound of scatterer distances [m]
        double nlos_variance = 1e-3;
        bool unit_los = false;   // Force beta_LoS = 1 (testing)
    };

    // LoS path plus nlos_count scatterers with independently drawn (theta, r)
    Channel synthesize_channel(double theta0, double r0, int nlos_count, Rng &rng,
                               const ArrayConfig &cfg, const ChannelDraw &draw = {});
}

#endif
