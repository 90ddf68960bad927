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

#ifndef nfbeam_CODEBOOK_IO_H
#define nfbeam_CODEBOOK_IO_H

#include "nfbeam/codebook.hpp"

#include <string>

namespace nfbeam
{
    // JSON layout:
    //   { "format": "nfbeam-codebook", "version": 1, "kind": ..., "plan": {...},
    //     "layers": [ { "layer": l, "basis_phases": [N],
    //                   "codewords": [ { "k", "b", "layer", "orientation", "parent", "phases"? } ] } ] }
    // Phases are radians, 17 significant digits. Per-codeword phases are optional because a
    // full hierarchy at N = 512 runs to hundreds of megabytes; the basis alone determines them.
    std::string codebook_to_json(const HierarchicalCodebook &book, bool codeword_phases = false);

    // Rebuilds the hierarchy from the stored plan, checks coordinates against it and, where
    // per-codeword phases are present, checks them against the rotated basis.
    HierarchicalCodebook codebook_from_json(const std::string &text);

    void export_codebook(const HierarchicalCodebook &book, const std::string &path, bool codeword_phases = false);
    HierarchicalCodebook import_codebook(const std::string &path);
}

#endif
