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

#include "nfbeam/kernels.hpp"
#include "nfbeam/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace nfbeam
{
    namespace
    {
        // Signed index of storage slot i and its position modulo M
        inline double idx(Eigen::Index i, Eigen::Index N) { return double(i - N / 2 + 1); }

        inline Eigen::Index mod_slot(Eigen::Index i, Eigen::Index N, Eigen::Index M)
        {
            Eigen::Index n = i - N / 2 + 1;
            n %= M;
            return n < 0 ? n + M : n;
        }

        inline double alt_sign(Eigen::Index i, Eigen::Index N) // exp(j pi n)
        {
            return ((i - N / 2 + 1) & 1) ? -1.0 : 1.0;
        }

        long lattice_index(double x, double step, const char *what)
        {
            const double r = x / step;
            const long j = std::lround(r);
            if (std::abs(r - double(j)) > 1e-6)
                throw std::invalid_argument(std::string("dominant_labels: beam ") + what + " is off the grid lattice");
            return j;
        }
    }

    namespace kernels
    {
        Eigen::MatrixXd gain_rows(const cvec &w, const std::vector<double> &k_values, int M)
        {
            const Eigen::Index N = w.size();
            if (M <= 0 || N == 0)
                throw std::invalid_argument("gain_rows: empty input");
            const double scale = 1.0 / w.norm();
            const int R = int(k_values.size());
            Eigen::MatrixXd out(R, M);

#pragma omp parallel
            {
                std::vector<cplx> x(static_cast<std::size_t>(M)), X(static_cast<std::size_t>(M));
#pragma omp for schedule(static)
                for (int r = 0; r < R; ++r)
                {
                    std::fill(x.begin(), x.end(), cplx(0.0));
                    for (Eigen::Index i = 0; i < N; ++i)
                    {
                        const double n = idx(i, N);
                        x[std::size_t(mod_slot(i, N, M))] += std::conj(w[i]) * (alt_sign(i, N) * std::polar(1.0, -pi * k_values[std::size_t(r)] * n * n));
                    }
                    fft_forward(x.data(), X.data(), M);
                    for (int q = 0; q < M; ++q)
                        out(r, q) = std::abs(X[std::size_t(q)]) * scale;
                }
            }
            return out;
        }

        Eigen::MatrixXd offset_table(const cvec &basis, double dk, int n_rows, int M)
        {
            const std::vector<double> ks = [&]
            {
                std::vector<double> v;
                for (int j = -(n_rows - 1); j <= n_rows - 1; ++j)
                    v.push_back(double(j) * dk);
                return v;
            }();
            return gain_rows(basis, ks, 2 * M);
        }

        LabelResult dominant_labels(const cvec &basis, const std::vector<KbPoint> &beams, double dk, int n_rows, int M)
        {
            if (beams.empty())
                throw std::invalid_argument("dominant_labels: no beams");
            const Eigen::MatrixXd T = offset_table(basis, dk, n_rows, M);
            const double tol = label_tie_tolerance * std::sqrt(double(basis.size()));

            const std::size_t C = beams.size();
            std::vector<long> jc(C), sc(C);
            for (std::size_t c = 0; c < C; ++c)
            {
                jc[c] = lattice_index(beams[c].k, dk, "slope");
                long s = lattice_index(wrap_intercept(beams[c].b) + 1.0, 1.0 / double(M), "intercept") % (2L * M);
                sc[c] = s < 0 ? s + 2L * M : s;
            }

            LabelResult res;
            res.labels = Eigen::MatrixXi::Constant(n_rows, M, -1);
            res.best = Eigen::MatrixXd::Constant(n_rows, M, -1.0);

#pragma omp parallel for schedule(dynamic, 1)
            for (int r = 0; r < n_rows; ++r)
            {
                for (std::size_t c = 0; c < C; ++c)
                {
                    const long row = long(r) - jc[c] + (n_rows - 1);
                    if (row < 0 || row >= T.rows())
                        continue; // slope offset beyond the table: beam cannot be evaluated here
                    for (int q = 0; q < M; ++q)
                    {
                        long t = (2L * q - sc[c] + M) % (2L * M);
                        if (t < 0)
                            t += 2L * M;
                        const double v = T(row, t);
                        if (v > res.best(r, q) + tol)
                        {
                            res.best(r, q) = v;
                            res.labels(r, q) = int(c);
                        }
                    }
                }
            }
            return res;
        }

        Eigen::MatrixXcd steering_adjoint(const cvec &x, const std::vector<double> &k_values)
        {
            const Eigen::Index N = x.size();
            const int P = int(k_values.size());
            const double scale = 1.0 / std::sqrt(double(N));
            Eigen::MatrixXcd z(P, N);

#pragma omp parallel
            {
                std::vector<cplx> in(static_cast<std::size_t>(N)), outv(static_cast<std::size_t>(N));
#pragma omp for schedule(static)
                for (int p = 0; p < P; ++p)
                {
                    std::fill(in.begin(), in.end(), cplx(0.0));
                    for (Eigen::Index i = 0; i < N; ++i)
                    {
                        const double n = idx(i, N);
                        in[std::size_t(mod_slot(i, N, N))] = x[i] * (alt_sign(i, N) * std::polar(1.0, pi * k_values[std::size_t(p)] * n * n));
                    }
                    fft_backward(in.data(), outv.data(), int(N));
                    for (Eigen::Index q = 0; q < N; ++q)
                        z(p, q) = outv[std::size_t(q)] * scale;
                }
            }
            return z;
        }

        cvec steering_apply(const Eigen::MatrixXcd &z, const std::vector<double> &k_values)
        {
            const Eigen::Index N = z.cols();
            const int P = int(k_values.size());
            if (z.rows() != P)
                throw std::invalid_argument("steering_apply: row count does not match slope count");
            const double scale = 1.0 / std::sqrt(double(N));
            Eigen::MatrixXcd parts(N, P);

#pragma omp parallel
            {
                std::vector<cplx> in(static_cast<std::size_t>(N)), outv(static_cast<std::size_t>(N));
#pragma omp for schedule(static)
                for (int p = 0; p < P; ++p)
                {
                    for (Eigen::Index q = 0; q < N; ++q)
                        in[std::size_t(q)] = z(p, q);
                    fft_forward(in.data(), outv.data(), int(N));
                    for (Eigen::Index i = 0; i < N; ++i)
                    {
                        const double n = idx(i, N);
                        parts(i, p) = outv[std::size_t(mod_slot(i, N, N))] * (alt_sign(i, N) * scale * std::polar(1.0, -pi * k_values[std::size_t(p)] * n * n));
                    }
                }
            }
            // Fixed summation order keeps the result bit-identical for any thread count
            cvec g = cvec::Zero(N);
            for (int p = 0; p < P; ++p)
                g += parts.col(p);
            return g;
        }

        Eigen::MatrixXcd lattice_response(const cvec &h, const std::vector<double> &k_values)
        {
            return steering_adjoint(h, k_values);
        }
    }

    namespace reference
    {
        Eigen::MatrixXd gain_rows(const cvec &w, const std::vector<double> &k_values, int M)
        {
            const Eigen::Index N = w.size();
            const double scale = 1.0 / w.norm();
            Eigen::MatrixXd out(Eigen::Index(k_values.size()), M);
            for (std::size_t r = 0; r < k_values.size(); ++r)
                for (int q = 0; q < M; ++q)
                {
                    const KbPoint p{k_values[r], -1.0 + 2.0 * double(q) / double(M)};
                    out(Eigen::Index(r), q) = std::abs(w.dot(approx_steering(p, int(N)))) * scale;
                }
            return out;
        }

        LabelResult dominant_labels(const cvec &basis, const std::vector<KbPoint> &beams, double dk, int n_rows, int M)
        {
            const Eigen::Index N = basis.size();
            const double tol = label_tie_tolerance * std::sqrt(double(N));
            std::vector<cvec> w;
            for (const auto &b : beams)
                w.push_back(normalized(basis.cwiseProduct(approx_steering(b, int(N)))));

            LabelResult res;
            res.labels = Eigen::MatrixXi::Constant(n_rows, M, -1);
            res.best = Eigen::MatrixXd::Constant(n_rows, M, -1.0);
            for (int r = 0; r < n_rows; ++r)
                for (int q = 0; q < M; ++q)
                {
                    const cvec a = approx_steering(KbPoint{double(r) * dk, -1.0 + 2.0 * double(q) / double(M)}, int(N));
                    for (std::size_t c = 0; c < w.size(); ++c)
                    {
                        const double v = std::abs(w[c].dot(a));
                        if (v > res.best(r, q) + tol)
                        {
                            res.best(r, q) = v;
                            res.labels(r, q) = int(c);
                        }
                    }
                }
            return res;
        }

        Eigen::MatrixXcd steering_adjoint(const cvec &x, const std::vector<double> &k_values)
        {
            const Eigen::Index N = x.size();
            const double scale = 1.0 / std::sqrt(double(N));
            Eigen::MatrixXcd z(Eigen::Index(k_values.size()), N);
            for (std::size_t p = 0; p < k_values.size(); ++p)
                for (Eigen::Index q = 0; q < N; ++q)
                {
                    const cvec a = approx_steering(KbPoint{k_values[p], -1.0 + 2.0 * double(q) / double(N)}, int(N));
                    z(Eigen::Index(p), q) = a.dot(x) * scale; // Eigen's dot conjugates the left operand
                }
            return z;
        }

        cvec steering_apply(const Eigen::MatrixXcd &z, const std::vector<double> &k_values)
        {
            const Eigen::Index N = z.cols();
            const double scale = 1.0 / std::sqrt(double(N));
            cvec g = cvec::Zero(N);
            for (std::size_t p = 0; p < k_values.size(); ++p)
                for (Eigen::Index q = 0; q < N; ++q)
                    g += approx_steering(KbPoint{k_values[p], -1.0 + 2.0 * double(q) / double(N)}, int(N)) * (z(Eigen::Index(p), q) * scale);
            return g;
        }

        Eigen::MatrixXcd lattice_response(const cvec &h, const std::vector<double> &k_values)
        {
            return steering_adjoint(h, k_values);
        }
    }
}
