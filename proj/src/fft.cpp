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

#include "nfbeam/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nfbeam
{
    namespace
    {
        class plan_cache
        {
        public:
            ~plan_cache()
            {
                for (auto &kv : plans)
                    fftw_destroy_plan(kv.second);
            }

            fftw_plan get(int M, int sign)
            {
                std::lock_guard<std::mutex> lock(mtx);
                auto key = std::make_pair(M, sign);
                auto it = plans.find(key);
                if (it != plans.end())
                    return it->second;
                // Planning needs scratch arrays; FFTW_ESTIMATE does not touch their contents
                std::vector<std::complex<double>> a(M), b(M);
                fftw_plan p = fftw_plan_dft_1d(M, reinterpret_cast<fftw_complex *>(a.data()),
                                               reinterpret_cast<fftw_complex *>(b.data()), sign,
                                               FFTW_ESTIMATE | FFTW_UNALIGNED);
                if (!p)
                    throw std::runtime_error("fft: plan creation failed");
                plans.emplace(key, p);
                return p;
            }

        private:
            std::mutex mtx;
            std::map<std::pair<int, int>, fftw_plan> plans;
        };

        plan_cache &cache()
        {
            static plan_cache c;
            return c;
        }

        void run(const std::complex<double> *in, std::complex<double> *out, int M, int sign)
        {
            if (M <= 0)
                throw std::invalid_argument("fft: length must be positive");
            fftw_plan p = cache().get(M, sign);
            if (in == out) // plans are out-of-place
            {
                std::vector<std::complex<double>> tmp(in, in + M);
                fftw_execute_dft(p, reinterpret_cast<fftw_complex *>(tmp.data()), reinterpret_cast<fftw_complex *>(out));
                return;
            }
            // Input is not modified for out-of-place complex transforms
            fftw_execute_dft(p, reinterpret_cast<fftw_complex *>(const_cast<std::complex<double> *>(in)),
                             reinterpret_cast<fftw_complex *>(out));
        }
    }

    void fft_forward(const std::complex<double> *in, std::complex<double> *out, int M)
    {
        run(in, out, M, FFTW_FORWARD);
    }

    void fft_backward(const std::complex<double> *in, std::complex<double> *out, int M)
    {
        run(in, out, M, FFTW_BACKWARD);
    }
}
