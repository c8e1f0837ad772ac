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

#include "langevin/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "langevin/errors.hpp"

namespace langevin::csv {

std::string format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InvalidInput("csv: not a number '" + std::string(text) + "'");
    return v;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw InvalidInput("csv: no column '" + std::string(name) + "'");
}

Writer::Writer(std::vector<std::string> header) { table_.header = std::move(header); }

void Writer::row(std::vector<std::string> fields) {
    if (fields.size() != table_.header.size()) throw InvalidInput("csv: row width mismatch");
    for (const auto& f : fields)
        if (f.find_first_of(",\n") != std::string::npos)
            throw InvalidInput("csv: field contains a separator: " + f);
    table_.rows.push_back(std::move(fields));
}

std::string Writer::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    };
    line(table_.header);
    for (const auto& r : table_.rows) line(r);
    return out;
}

void Writer::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
    out << str();
}

Table parse(std::string_view text) {
    Table t;
    bool first = true;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        std::vector<std::string> fields;
        std::size_t s = 0;
        while (true) {
            const std::size_t c = line.find(',', s);
            fields.emplace_back(line.substr(s, c == std::string_view::npos ? line.size() - s : c - s));
            if (c == std::string_view::npos) break;
            s = c + 1;
        }
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != t.header.size()) throw InvalidInput("csv: ragged row");
            t.rows.push_back(std::move(fields));
        }
    }
    return t;
}

Table load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace langevin::csv
