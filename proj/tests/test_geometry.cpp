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

#include "catch_amalgamated.hpp"

#include <cmath>

using namespace nfbeam;
using Catch::Approx;

namespace
{
    // Independent long-double evaluation of the spherical-wave phase, common phase removed
    cvec exact_oracle(double theta, double r, const ArrayConfig &cfg)
    {
        const long double lam = cfg.c / cfg.f_c, d = lam / 2;
        cvec v(cfg.n_bs);
        for (int i = 0; i < cfg.n_bs; ++i)
        {
            const long double x = (i - cfg.n_bs / 2 + 1) * d;
            const long double rn = std::sqrt((long double)r * r + x * x + 2 * r * x * theta);
            const long double ph = -2 * 3.14159265358979323846264338327950288L * (rn - r) / lam;
            v[i] = cplx(double(std::cos(ph)), double(std::sin(ph)));
        }
        return v;
    }

    double max_modulus_error(const cvec &v)
    {
        return (v.cwiseAbs().array() - 1.0).abs().maxCoeff();
    }
}

TEST_CASE("array config validation")
{
    CHECK_NOTHROW(ArrayConfig(4, 50e9).validate());
    CHECK_THROWS_AS(ArrayConfig(3, 50e9).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ArrayConfig(2, 50e9).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ArrayConfig(64, -1.0).validate(), std::invalid_argument);
    const ArrayConfig cfg(8, 50e9);
    CHECK(cfg.index(0) == -3);
    CHECK(cfg.index(7) == 4);
}

TEST_CASE("exact steering")
{
    const ArrayConfig cfg(512, 50e9);
    const cvec v = exact_steering(0.3, 50.0, cfg);
    // n = 0 sits at slot N/2 - 1
    CHECK(std::abs(v[cfg.n_bs / 2 - 1] - cplx(1.0, 0.0)) < 1e-15);
    CHECK(max_modulus_error(v) < 1e-12);
    CHECK((v - exact_oracle(0.3, 50.0, cfg)).cwiseAbs().maxCoeff() < 1e-9);

    const ArrayConfig small(64, 50e9);
    CHECK((exact_steering(0.0, 1e9, small) - cvec::Ones(64)).cwiseAbs().maxCoeff() < 1e-6);

    CHECK_THROWS_AS(exact_steering(0.0, 0.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(exact_steering(1.2, 10.0, cfg), std::invalid_argument);
}

TEST_CASE("quadratic phase approximation stays close to the spherical wave")
{
    const ArrayConfig cfg(512, 50e9);
    const cvec e = exact_steering(0.3, 50.0, cfg);
    const cvec a = approx_steering(to_kb(0.3, 50.0, cfg), cfg);
    double worst = 0.0;
    for (int i = 0; i < cfg.n_bs; ++i)
        worst = std::max(worst, std::abs(std::arg(e[i] * std::conj(a[i]))));
    // brute-force value 0.0261 rad
    CHECK(worst < 0.15);
    CHECK(worst == Approx(0.0261).margin(5e-4));
}

TEST_CASE("approx steering examples")
{
    const int N = 64;
    CHECK((approx_steering({0.0, 0.0}, N) - cvec::Ones(N)).cwiseAbs().maxCoeff() < 1e-15);

    const cvec w = approx_steering({0.0, 2.0 / N}, N);
    CHECK(std::abs(w.dot(approx_steering({0.0, 0.0}, N))) < 1e-12);

    const double k = 2.0 / (N * N);
    cplx sum = 0.0;
    for (int n = -N / 2 + 1; n <= N / 2; ++n)
        sum += std::polar(1.0, -pi * k * n * n);
    CHECK(std::abs(approx_steering({k, 0.0}, N).dot(cvec::Ones(N))) == Approx(std::abs(sum)).epsilon(1e-12));
}

TEST_CASE("intercept wrapping")
{
    CHECK(wrap_intercept(0.25) == 0.25);
    CHECK(wrap_intercept(1.0) == -1.0);
    CHECK(wrap_intercept(-1.0) == -1.0);
    CHECK(wrap_intercept(1.5) == Approx(-0.5));
    CHECK(wrap_intercept(-3.25) == Approx(0.75));
}

TEST_CASE("slope-intercept mapping")
{
    const ArrayConfig cfg(512, 50e9);
    const double lam = cfg.lambda();
    CHECK(to_kb(1.0, 20.0, cfg).k == 0.0);
    CHECK(to_kb(-1.0, 20.0, cfg).b == -1.0);
    const KbPoint unit = to_kb(0.0, lam / 4.0, cfg);
    CHECK(unit.k == Approx(1.0).epsilon(1e-15));
    CHECK(unit.b == 0.0);
    CHECK(to_kb(0.0, fresnel_min_distance(cfg), cfg).k == Approx(std::sqrt(2.0 / std::pow(512.0, 3))).epsilon(1e-12));

    const PolarPoint inf = from_kb({0.0, 0.5}, cfg);
    CHECK(inf.theta == 0.5);
    CHECK(std::isinf(inf.r));
    CHECK(from_kb({1e-4, 0.0}, cfg).r == Approx(14.99).margin(0.01));
    CHECK_THROWS_AS(from_kb({1e-4, 1.0}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(to_kb(0.0, -1.0, cfg), std::invalid_argument);

    const PolarPoint back = from_kb(to_kb(0.3, 40.0, cfg), cfg);
    CHECK(back.theta == Approx(0.3).epsilon(1e-12));
    CHECK(back.r == Approx(40.0).epsilon(1e-12));
}

TEST_CASE("distance bounds")
{
    const ArrayConfig cfg(512, 50e9);
    CHECK(fresnel_min_distance(cfg) == Approx(12.29).margin(0.01));
    // 0.5 sqrt(D^3 / lambda) with D = 256 lambda at 30 GHz
    CHECK(fresnel_min_distance(ArrayConfig(512, 30e9)) == Approx(20.48).margin(1e-9));
    CHECK(fresnel_min_distance(ArrayConfig(256, 50e9)) * 8.0 == Approx(fresnel_min_distance(ArrayConfig(1024, 50e9))).epsilon(1e-12));

    const auto r = rayleigh_distances(cfg, effective_rayleigh_fraction);
    CHECK(r.effective == Approx(136.0).margin(2.0));
    CHECK(r.classical == Approx(786.0).margin(1.0));
    const auto one = rayleigh_distances(cfg, 1.0);
    CHECK(one.effective == one.classical);
    CHECK_THROWS_AS(rayleigh_distances(cfg, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rayleigh_distances(cfg, 1.5), std::invalid_argument);
}

TEST_CASE("channel synthesis")
{
    const ArrayConfig cfg(128, 50e9);
    ChannelDraw unit;
    unit.unit_los = true;
    Rng rng(5);
    const Channel ch = synthesize_channel(0.2, 30.0, 0, rng, cfg, unit);
    CHECK((ch.vector - exact_steering(0.2, 30.0, cfg)).cwiseAbs().maxCoeff() < 1e-15);

    Rng a(11), b(11);
    const Channel c1 = synthesize_channel(-0.4, 40.0, 3, a, cfg), c2 = synthesize_channel(-0.4, 40.0, 3, b, cfg);
    CHECK(c1.vector == c2.vector);
    CHECK(c1.nlos.size() == 3);
    CHECK((c1.vector - c1.rebuild(cfg)).cwiseAbs().maxCoeff() < 1e-12);
    for (const auto &p : c1.nlos)
    {
        CHECK(p.r >= 13.0);
        CHECK(p.r <= 150.0);
        CHECK(std::abs(p.theta) <= 1.0);
    }
}

TEST_CASE("path gain moments")
{
    const ArrayConfig cfg(4, 50e9);
    Rng rng(derive_seed(99, 1));
    const int draws = 100000;
    double los = 0.0, nlos = 0.0;
    for (int t = 0; t < draws; ++t)
    {
        const Channel ch = synthesize_channel(0.0, 20.0, 3, rng, cfg);
        los += std::norm(ch.los_gain);
        for (const auto &p : ch.nlos)
            nlos += std::norm(p.gain);
    }
    CHECK(los / draws == Approx(1.0).margin(0.02));
    CHECK(nlos / draws == Approx(3e-3).epsilon(0.03));
}

TEST_CASE("seed derivation separates streams")
{
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0, 1) != derive_seed(1, 0, 2));
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("property: unit modulus and orthogonality")
{
    Rng rng(2024);
    std::uniform_real_distribution<double> uk(0.0, 1e-3), ub(-1.0, 1.0);
    for (int N : {16, 64, 256})
    {
        for (int t = 0; t < 20; ++t)
        {
            const double k0 = uk(rng), b0 = ub(rng);
            const cvec w = approx_steering({k0, b0}, N);
            CHECK(max_modulus_error(w) < 1e-12);
            CHECK(std::abs(w.norm() * w.norm() - N) < 1e-9 * N);
            const int p = 1 + int(rng() % std::uint64_t(N - 1));
            const cvec v = approx_steering({k0, b0 + 2.0 * p / N}, N);
            CHECK(std::abs(w.dot(v)) < 1e-9 * N);
            const cvec nw = normalized(w);
            CHECK(std::abs(nw.norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("property: slope-intercept round trip")
{
    const ArrayConfig cfg(512, 50e9);
    Rng rng(7);
    std::uniform_real_distribution<double> ut(-0.999, 0.999), ulr(std::log(fresnel_min_distance(cfg)), std::log(1e4));
    for (int t = 0; t < 500; ++t)
    {
        const double th = ut(rng), r = std::exp(ulr(rng));
        const PolarPoint p = from_kb(to_kb(th, r, cfg), cfg);
        CHECK(p.theta == Approx(th).epsilon(1e-12));
        CHECK(p.r == Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("property: approximation coherence beyond the Fresnel bound")
{
    // Brute-force minimum over a theta x r sweep for N in {64..512} was 0.974
    Rng rng(31);
    std::uniform_real_distribution<double> ut(-0.999, 0.999), us(0.0, 1.0);
    for (int N : {64, 128, 256, 512})
    {
        const ArrayConfig cfg(N, 50e9);
        const double rmin = fresnel_min_distance(cfg);
        for (int t = 0; t < 25; ++t)
        {
            const double th = ut(rng), r = rmin * std::pow(1e4 / rmin, us(rng) * us(rng));
            const double c = std::abs(exact_steering(th, r, cfg).dot(approx_steering(to_kb(th, r, cfg), cfg))) / N;
            CHECK(c >= 0.95);
        }
    }
}
