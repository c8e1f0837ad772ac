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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace langevin::csv {

/// Shortest decimal text that parses back to the same double ("inf", "nan" for
/// the specials).
std::string format(double v);
double parse_double(std::string_view text);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
};

// Plain comma-separated files: no quoting, fields must not contain ',' or '\n'.
class Writer {
public:
    explicit Writer(std::vector<std::string> header);
    void row(std::vector<std::string> fields);
    std::string str() const;
    void save(const std::filesystem::path& path) const;

private:
    Table table_;
};

Table parse(std::string_view text);
Table load(const std::filesystem::path& path);

}  // namespace langevin::csv
