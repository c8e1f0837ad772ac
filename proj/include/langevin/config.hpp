/*
   Copyright 2026 The langevin-stopped authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace langevin {

// Flat `key = value` experiment file. '#' starts a comment; blank lines are
// ignored. Keys outside the known set, duplicates and lines without '=' are
// rejected with ConfigError.
class ExperimentConfig {
public:
    static ExperimentConfig parse(std::string_view text);
    static ExperimentConfig load(const std::filesystem::path& path);

    /// All keys accepted in a config file.
    static const std::vector<std::string_view>& known_keys();

    bool has(std::string_view key) const;
    std::string get_string(std::string_view key, std::string_view fallback) const;
    double get_double(std::string_view key, double fallback) const;
    std::optional<double> get_optional_double(std::string_view key) const;
    std::size_t get_count(std::string_view key, std::size_t fallback) const;
    std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
    /// Whitespace- or comma-separated reals; an empty value gives an empty list.
    std::vector<double> get_list(std::string_view key, const std::vector<double>& fallback) const;
    /// Semicolon-separated groups of reals.
    std::vector<std::vector<double>> get_groups(std::string_view key) const;

    void set(std::string_view key, std::string value);
    const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

private:
    const std::string* find(std::string_view key) const;
    std::map<std::string, std::string, std::less<>> values_;
};

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace langevin
