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

#include "nfbeam/codebook_io.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nfbeam
{
    using nlohmann::json;

    namespace
    {
        json phases_of(const cvec &v)
        {
            json a = json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i)
                a.push_back(std::arg(v[i]));
            return a;
        }

        cvec vector_of(const json &a, int n_bs, const std::string &what)
        {
            if (!a.is_array() || int(a.size()) != n_bs)
                throw std::invalid_argument("codebook json: " + what + " must hold " + std::to_string(n_bs) + " phases");
            cvec v(n_bs);
            for (int i = 0; i < n_bs; ++i)
                v[i] = std::polar(1.0, a[std::size_t(i)].get<double>());
            return v;
        }

        bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }
    }

    std::string codebook_to_json(const HierarchicalCodebook &book, bool codeword_phases)
    {
        const LayerPlan &p = book.plan;
        json root;
        root["format"] = "nfbeam-codebook";
        root["version"] = 1;
        root["kind"] = to_string(book.kind);
        root["plan"] = {{"n_bs", p.n_bs}, {"r_min_plan", p.r_min_plan}, {"k_max_required", p.k_max_required},
                        {"k_max", p.k_max}, {"B_max", p.B_max}, {"B_min", p.B_min}, {"delta_k", p.delta_k},
                        {"L_k1_rounded", p.L_k1_rounded}, {"L_k1", p.L_k1}, {"L", p.L}, {"N1", p.N1}};
        json layers = json::array();
        for (int l = 1; l <= book.n_layers(); ++l)
        {
            const CodebookLayer &layer = book.layer(l);
            json cws = json::array();
            for (std::size_t i = 0; i < layer.codewords.size(); ++i)
            {
                const Codeword &c = layer.codewords[i];
                json o = {{"k", c.coord.k}, {"b", c.coord.b}, {"layer", c.layer},
                          {"orientation", to_string(c.orientation)}, {"parent", c.parent}};
                if (codeword_phases)
                    o["phases"] = phases_of(book.codeword_vector(l, int(i)));
                cws.push_back(std::move(o));
            }
            layers.push_back({{"layer", l}, {"basis_phases", phases_of(layer.basis)}, {"codewords", std::move(cws)}});
        }
        root["layers"] = std::move(layers);
        return root.dump() + "\n";
    }

    HierarchicalCodebook codebook_from_json(const std::string &text)
    {
        const json root = json::parse(text);
        if (root.value("format", std::string()) != "nfbeam-codebook")
            throw std::invalid_argument("codebook json: missing format tag");
        if (root.value("version", 0) != 1)
            throw std::invalid_argument("codebook json: unsupported version");

        const json &jp = root.at("plan");
        LayerPlan plan;
        plan.n_bs = jp.at("n_bs").get<int>();
        plan.r_min_plan = jp.at("r_min_plan").get<double>();
        plan.k_max_required = jp.at("k_max_required").get<double>();
        plan.k_max = jp.at("k_max").get<double>();
        plan.B_max = jp.at("B_max").get<double>();
        plan.B_min = jp.at("B_min").get<double>();
        plan.delta_k = jp.at("delta_k").get<double>();
        plan.L_k1_rounded = jp.at("L_k1_rounded").get<int>();
        plan.L_k1 = jp.at("L_k1").get<int>();
        plan.L = jp.at("L").get<int>();
        plan.N1 = jp.at("N1").get<int>();
        if (plan.n_bs < 2 || plan.L < 1 || plan.L_k1 != (1 << (plan.L - 1)) || plan.delta_k <= 0.0)
            throw std::invalid_argument("codebook json: inconsistent plan");

        HierarchicalCodebook book = build_chirp_codebook(plan);
        const std::string kind = root.at("kind").get<std::string>();
        if (kind == "enhanced")
            book.kind = CodebookKind::Enhanced;
        else if (kind != "spatial_chirp")
            throw std::invalid_argument("codebook json: unknown kind '" + kind + "'");

        const json &layers = root.at("layers");
        if (!layers.is_array() || int(layers.size()) != book.n_layers())
            throw std::invalid_argument("codebook json: layer count does not match the plan");

        const double tol = 1e-12;
        for (int l = 1; l <= book.n_layers(); ++l)
        {
            const json &jl = layers[std::size_t(l - 1)];
            CodebookLayer &layer = book.layers[std::size_t(l - 1)];
            layer.basis = vector_of(jl.at("basis_phases"), plan.n_bs, "basis_phases of layer " + std::to_string(l));

            const json &cws = jl.at("codewords");
            if (!cws.is_array() || cws.size() != layer.codewords.size())
                throw std::invalid_argument("codebook json: codeword count mismatch on layer " + std::to_string(l));
            for (std::size_t i = 0; i < cws.size(); ++i)
            {
                const json &c = cws[i];
                const Codeword &ref = layer.codewords[i];
                if (!close(c.at("k").get<double>(), ref.coord.k, tol) || !close(c.at("b").get<double>(), ref.coord.b, tol) ||
                    c.at("layer").get<int>() != l || orientation_from_string(c.at("orientation").get<std::string>()) != ref.orientation)
                    throw std::invalid_argument("codebook json: codeword " + std::to_string(i) + " of layer " +
                                                std::to_string(l) + " does not match the plan");
                if (c.contains("phases"))
                {
                    const cvec stored = vector_of(c.at("phases"), plan.n_bs, "codeword phases");
                    const cvec expect = book.codeword_vector(l, int(i));
                    if ((stored - expect).cwiseAbs().maxCoeff() > 1e-9)
                        throw std::invalid_argument("codebook json: phases of codeword " + std::to_string(i) + " of layer " +
                                                    std::to_string(l) + " are not the rotated layer basis");
                }
            }
        }
        return book;
    }

    void export_codebook(const HierarchicalCodebook &book, const std::string &path, bool codeword_phases)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("export_codebook: cannot open '" + path + "' for writing");
        f << codebook_to_json(book, codeword_phases);
        f.close();
        if (!f)
            throw std::runtime_error("export_codebook: write failed for '" + path + "'");
    }

    HierarchicalCodebook import_codebook(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("import_codebook: cannot open '" + path + "'");
        std::ostringstream s;
        s << f.rdbuf();
        return codebook_from_json(s.str());
    }
}
