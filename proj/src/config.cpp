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

#include "langevin/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "langevin/errors.hpp"

namespace langevin {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <class T>
T parse_value(std::string_view key, std::string_view text) {
    text = trim(text);
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ConfigError("key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
    return v;
}

std::vector<double> parse_reals(std::string_view key, std::string_view text) {
    std::vector<double> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
            ++i;
        const std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ',')
            ++i;
        if (i > start) out.push_back(parse_value<double>(key, text.substr(start, i - start)));
    }
    return out;
}

}  // namespace

const std::vector<std::string_view>& ExperimentConfig::known_keys() {
    static const std::vector<std::string_view> keys{
        "potential.kind",
        "potential.n_particles",
        "potential.space_dim",
        "potential.confinement_stiffness",
        "potential.lj_epsilon",
        "potential.lj_sigma",
        "scheme.kind",
        "scheme.delta",
        "scheme.gamma",
        "scheme.beta",
        "scheme.l",
        "lyapunov.b",
        "lyapunov.r1",
        "lyapunov.r2",
        "lyapunov.n_samples",
        "lyapunov.n_probes",
        "lyapunov.probe_low",
        "lyapunov.probe_high",
        "lyapunov.probe_x",
        "lyapunov.probe_y",
        "run.n_chains",
        "run.n_steps",
        "run.burn_in",
        "run.seed",
        "run.record_stride",
        "run.init_kind",
        "run.init_sigma",
        "run.init_x",
        "run.init_y",
        "run.threads",
        "observables",
        "analysis.observable",
        "analysis.delta_grid",
        "analysis.t",
        "analysis.reference",
        "analysis.fine_delta",
        "analysis.mu_reference",
        "analysis.probe_ladder",
        "analysis.gibbs_samples",
    };
    return keys;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    ExperimentConfig cfg;
    const auto& keys = known_keys();
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("unknown config key '" + std::string(key) + "' (line " +
                              std::to_string(line_no) + ")");
        if (cfg.values_.count(key) != 0)
            throw ConfigError("duplicate config key '" + std::string(key) + "'");
        cfg.values_.emplace(std::string(key), std::string(value));
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const std::string* ExperimentConfig::find(std::string_view key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

bool ExperimentConfig::has(std::string_view key) const { return find(key) != nullptr; }

std::string ExperimentConfig::get_string(std::string_view key, std::string_view fallback) const {
    const auto* v = find(key);
    return v ? *v : std::string(fallback);
}

double ExperimentConfig::get_double(std::string_view key, double fallback) const {
    const auto* v = find(key);
    return v ? parse_value<double>(key, *v) : fallback;
}

std::optional<double> ExperimentConfig::get_optional_double(std::string_view key) const {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    return parse_value<double>(key, *v);
}

std::size_t ExperimentConfig::get_count(std::string_view key, std::size_t fallback) const {
    const auto* v = find(key);
    if (!v) return fallback;
    // Accept integral reals such as 1e6.
    const double d = parse_value<double>(key, *v);
    if (!(d >= 0.0) || d != static_cast<double>(static_cast<std::size_t>(d)))
        throw ConfigError("key '" + std::string(key) + "' must be a non-negative integer");
    return static_cast<std::size_t>(d);
}

std::uint64_t ExperimentConfig::get_u64(std::string_view key, std::uint64_t fallback) const {
    const auto* v = find(key);
    return v ? parse_value<std::uint64_t>(key, *v) : fallback;
}

std::vector<double> ExperimentConfig::get_list(std::string_view key,
                                               const std::vector<double>& fallback) const {
    const auto* v = find(key);
    return v ? parse_reals(key, *v) : fallback;
}

std::vector<std::vector<double>> ExperimentConfig::get_groups(std::string_view key) const {
    std::vector<std::vector<double>> out;
    const auto* v = find(key);
    if (!v) return out;
    std::string_view text = *v;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto group = trim(text.substr(pos, end - pos));
        if (!group.empty()) out.push_back(parse_reals(key, group));
        pos = end + 1;
    }
    return out;
}

void ExperimentConfig::set(std::string_view key, std::string value) {
    values_.insert_or_assign(std::string(key), std::move(value));
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace langevin
