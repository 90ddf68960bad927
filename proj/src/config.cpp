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

#include "nfbeam/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace nfbeam
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos)
                return "";
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        }

        double to_double(const std::string &key, const std::string &text)
        {
            const std::string t = trim(text);
            double v = 0.0;
            const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
            if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
                throw ConfigError(key, "expected a number, got '" + text + "'");
            return v;
        }
    }

    KeyValues parse_key_values(const std::string &text)
    {
        KeyValues kv;
        std::istringstream in(text);
        std::string line;
        int no = 0;
        while (std::getline(in, line))
        {
            ++no;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(no), "expected 'section.key = value'");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty() || key.find('.') == std::string::npos)
                throw ConfigError("line " + std::to_string(no), "key must have the form section.key");
            kv[key] = trim(line.substr(eq + 1));
        }
        return kv;
    }

    KeyValues load_key_values(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw ConfigError("config", "cannot read '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_key_values(ss.str());
    }

    double get_double(const KeyValues &kv, const std::string &key, double fallback)
    {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : to_double(key, it->second);
    }

    long get_long(const KeyValues &kv, const std::string &key, long fallback)
    {
        const auto it = kv.find(key);
        if (it == kv.end())
            return fallback;
        const std::string t = trim(it->second);
        long v = 0;
        const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size())
            throw ConfigError(key, "expected an integer, got '" + it->second + "'");
        return v;
    }

    std::string get_string(const KeyValues &kv, const std::string &key, const std::string &fallback)
    {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }

    std::vector<std::string> split_list(const std::string &text)
    {
        std::vector<std::string> out;
        std::string cur;
        std::istringstream in(text);
        while (std::getline(in, cur, ','))
        {
            cur = trim(cur);
            if (!cur.empty())
                out.push_back(cur);
        }
        return out;
    }

    std::vector<double> parse_double_list(const std::string &key, const std::string &text)
    {
        std::vector<double> out;
        for (const auto &item : split_list(text))
        {
            // a:b:c ranges (start:step:stop, inclusive)
            const auto c1 = item.find(':');
            if (c1 == std::string::npos)
            {
                out.push_back(to_double(key, item));
                continue;
            }
            const auto c2 = item.find(':', c1 + 1);
            if (c2 == std::string::npos)
                throw ConfigError(key, "range must be start:step:stop");
            const double a = to_double(key, item.substr(0, c1));
            const double s = to_double(key, item.substr(c1 + 1, c2 - c1 - 1));
            const double b = to_double(key, item.substr(c2 + 1));
            if (!(s > 0.0) || b < a)
                throw ConfigError(key, "range needs a positive step and start <= stop");
            for (long i = 0;; ++i)
            {
                const double v = a + double(i) * s;
                if (v > b + 1e-9 * s)
                    break;
                out.push_back(v);
            }
        }
        if (out.empty())
            throw ConfigError(key, "empty list");
        return out;
    }
}
