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

#include "nfbeam/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nfbeam
{
    namespace
    {
        std::uint64_t splitmix64(std::uint64_t &state)
        {
            std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        void check_angle(double theta0, const char *name)
        {
            if (!std::isfinite(theta0) || std::abs(theta0) > 1.0)
                throw std::invalid_argument(std::string(name) + ": |theta0| must not exceed 1");
        }

        void check_distance(double r0, const char *name)
        {
            if (!(r0 > 0.0))
                throw std::invalid_argument(std::string(name) + ": distance must be positive");
        }
    }

    std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c)
    {
        std::uint64_t state = seed;
        std::uint64_t out = splitmix64(state);
        for (std::uint64_t v : {a, b, c})
        {
            state ^= v + 0x632be59bd9b4e019ULL + (out << 6) + (out >> 2);
            out = splitmix64(state);
        }
        return out;
    }

    cplx complex_normal(Rng &rng, double variance)
    {
        std::normal_distribution<double> nd(0.0, 1.0);
        const double s = std::sqrt(0.5 * variance);
        const double re = nd(rng);
        const double im = nd(rng);
        return {s * re, s * im};
    }

    ArrayConfig::ArrayConfig(int n_bs_, double f_c_, double c_) : n_bs(n_bs_), f_c(f_c_), c(c_)
    {
        validate();
    }

    void ArrayConfig::validate() const
    {
        if (n_bs < 4 || n_bs % 2 != 0)
            throw std::invalid_argument("ArrayConfig: n_bs must be an even integer >= 4");
        if (!(f_c > 0.0) || !std::isfinite(f_c))
            throw std::invalid_argument("ArrayConfig: f_c must be positive");
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument("ArrayConfig: c must be positive");
    }

    double wrap_intercept(double b)
    {
        double w = std::fmod(b + 1.0, 2.0);
        if (w < 0.0)
            w += 2.0;
        if (w >= 2.0) // fmod rounding guard
            w -= 2.0;
        return w - 1.0;
    }

    SteeringVector exact_steering(double theta0, double r0, const ArrayConfig &cfg)
    {
        check_angle(theta0, "exact_steering");
        check_distance(r0, "exact_steering");
        const int N = cfg.n_bs;
        const double d = cfg.spacing(), lambda = cfg.lambda();
        SteeringVector v(N);
        for (int i = 0; i < N; ++i)
        {
            const double x = double(cfg.index(i)) * d;
            const double rn = std::sqrt(r0 * r0 + x * x + 2.0 * r0 * x * theta0);
            // r_n - r0 without cancellation
            const double dr = (x * x + 2.0 * r0 * x * theta0) / (rn + r0);
            v[i] = std::polar(1.0, -2.0 * pi * dr / lambda);
        }
        return v;
    }

    SteeringVector approx_steering(const KbPoint &p, int n_bs)
    {
        SteeringVector v(n_bs);
        for (int i = 0; i < n_bs; ++i)
        {
            const double n = double(i - n_bs / 2 + 1);
            v[i] = std::polar(1.0, -pi * (p.b * n + p.k * n * n));
        }
        return v;
    }

    SteeringVector approx_steering(const KbPoint &p, const ArrayConfig &cfg)
    {
        return approx_steering(p, cfg.n_bs);
    }

    cvec normalized(const cvec &v)
    {
        const double nrm = v.norm();
        if (nrm == 0.0)
            throw std::invalid_argument("normalized: zero vector");
        return v / nrm;
    }

    KbPoint to_kb(double theta0, double r0, const ArrayConfig &cfg)
    {
        check_angle(theta0, "to_kb");
        check_distance(r0, "to_kb");
        return {cfg.lambda() * (1.0 - theta0 * theta0) / (4.0 * r0), theta0};
    }

    PolarPoint from_kb(const KbPoint &p, const ArrayConfig &cfg)
    {
        if (p.k < 0.0 || std::abs(p.b) > 1.0)
            throw std::invalid_argument("from_kb: coordinate outside the k-b domain");
        if (p.k == 0.0)
            return {p.b, std::numeric_limits<double>::infinity()};
        if (std::abs(p.b) == 1.0)
            throw std::invalid_argument("from_kb: k > 0 with |b| = 1 has no physical source");
        return {p.b, cfg.lambda() * (1.0 - p.b * p.b) / (4.0 * p.k)};
    }

    double fresnel_min_distance(const ArrayConfig &cfg)
    {
        const double D = cfg.aperture();
        return 0.5 * std::sqrt(D * D * D / cfg.lambda());
    }

    RayleighDistances rayleigh_distances(const ArrayConfig &cfg, double epsilon)
    {
        if (!(epsilon > 0.0 && epsilon <= 1.0))
            throw std::invalid_argument("rayleigh_distances: epsilon must lie in (0, 1]");
        const double D = cfg.aperture();
        const double classical = 2.0 * D * D / cfg.lambda();
        return {classical, epsilon * classical};
    }

    cvec Channel::rebuild(const ArrayConfig &cfg) const
    {
        cvec h = los_gain * exact_steering(theta0, r0, cfg);
        for (const auto &p : nlos)
            h += p.gain * exact_steering(p.theta, p.r, cfg);
        return h;
    }

    Channel synthesize_channel(double theta0, double r0, int nlos_count, Rng &rng,
                               const ArrayConfig &cfg, const ChannelDraw &draw)
    {
        if (nlos_count < 0)
            throw std::invalid_argument("synthesize_channel: nlos_count must be >= 0");
        if (!(draw.r_lo > 0.0) || draw.r_hi < draw.r_lo)
            throw std::invalid_argument("synthesize_channel: invalid scatterer distance range");

        Channel ch;
        ch.theta0 = theta0;
        ch.r0 = r0;
        ch.los_gain = complex_normal(rng, 1.0); // drawn even when forced, keeps streams aligned
        if (draw.unit_los)
            ch.los_gain = 1.0;

        std::uniform_real_distribution<double> ut(-1.0, 1.0), ur(draw.r_lo, draw.r_hi);
        for (int l = 0; l < nlos_count; ++l)
        {
            Path p;
            p.gain = complex_normal(rng, draw.nlos_variance);
            p.theta = ut(rng);
            p.r = ur(rng);
            ch.nlos.push_back(p);
        }
        ch.vector = ch.rebuild(cfg);
        return ch;
    }
}
