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

#ifndef nfbeam_fft_H
#define nfbeam_fft_H

#include <complex>

namespace nfbeam
{
    // Unnormalized 1-D complex DFTs backed by FFTW. Plans are created once per length
    // (under a lock) and executed with the new-array interface, so calls are thread safe.
    //   forward:  X_q = sum_n x_n exp(-j 2pi q n / M)
    //   backward: X_q = sum_n x_n exp(+j 2pi q n / M)
    void fft_forward(const std::complex<double> *in, std::complex<double> *out, int M);
    void fft_backward(const std::complex<double> *in, std::complex<double> *out, int M);
}

#endif
