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

#ifndef nfbeam_config_H
#define nfbeam_config_H

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfbeam
{
    // Invalid configuration value; field() names the offending key
    class ConfigError : public std::invalid_argument
    {
    public:
        ConfigError(const std::string &field, const std::string &message)
            : std::invalid_argument(field + ": " + message), field_(field) {}
        const std::string &field() const { return field_; }

    private:
        std::string field_;
    };

    // Flat "section.key = value" text, '#' starts a comment. Later keys override earlier ones.
    using KeyValues = std::map<std::string, std::string>;

    KeyValues parse_key_values(const std::string &text);
    KeyValues load_key_values(const std::string &path);

    // Typed accessors; throw ConfigError naming the key
    double get_double(const KeyValues &kv, const std::string &key, double fallback);
    long get_long(const KeyValues &kv, const std::string &key, long fallback);
    std::string get_string(const KeyValues &kv, const std::string &key, const std::string &fallback);
    std::vector<double> parse_double_list(const std::string &key, const std::string &text);
    std::vector<std::string> split_list(const std::string &text);
}

#endif
