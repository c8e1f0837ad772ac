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


#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "doctest.h"
#include "langevin/config.hpp"
#include "langevin/csv.hpp"
#include "langevin/errors.hpp"

using namespace langevin;

TEST_CASE("config parsing") {
    const auto cfg = ExperimentConfig::parse(
        "# comment line\n"
        "potential.kind = harmonic   # trailing comment\n"
        "\n"
        "scheme.delta=0.02\n"
        "run.n_chains = 1e6\n"
        "run.seed = 18446744073709551615\n"
        "analysis.delta_grid = 0.08, 0.04 0.02,0.01\n"
        "lyapunov.probe_x = 1 2; 3 4 ;\n"
        "analysis.probe_ladder =\n");
    CHECK(cfg.get_string("potential.kind", "") == "harmonic");
    CHECK(cfg.get_double("scheme.delta", 0) == 0.02);
    CHECK(cfg.get_double("scheme.gamma", 1.5) == 1.5);
    CHECK(cfg.get_count("run.n_chains", 0) == 1000000);
    CHECK(cfg.get_u64("run.seed", 0) == std::numeric_limits<std::uint64_t>::max());
    CHECK(cfg.get_list("analysis.delta_grid", {}) == std::vector<double>{0.08, 0.04, 0.02, 0.01});
    CHECK(cfg.get_list("analysis.probe_ladder", {1.0}).empty());
    CHECK(cfg.get_list("run.init_x", {1.0, 2.0}) == std::vector<double>{1.0, 2.0});
    const auto groups = cfg.get_groups("lyapunov.probe_x");
    REQUIRE(groups.size() == 2);
    CHECK(groups[1] == std::vector<double>{3, 4});
    CHECK(cfg.has("scheme.delta"));
    CHECK_FALSE(cfg.has("scheme.beta"));
    CHECK_FALSE(cfg.get_optional_double("analysis.mu_reference").has_value());
}

TEST_CASE("config errors name the offending key") {
    try {
        ExperimentConfig::parse("scheme.delta = 0.1\nscheme.deltta = 0.01\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("scheme.deltta") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(ExperimentConfig::parse("scheme.delta = 1\nscheme.delta = 2\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("just some words\n"), ConfigError);
    const auto cfg = ExperimentConfig::parse("run.n_chains = 2.5\nscheme.delta = fast\n");
    CHECK_THROWS_AS(cfg.get_count("run.n_chains", 1), ConfigError);
    CHECK_THROWS_AS(cfg.get_double("scheme.delta", 1), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config.cfg"), ConfigError);
}

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("csv number formatting round trips") {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, -0.0, 123456789.125,
                     std::nextafter(1.0, 2.0)}) {
        const double back = csv::parse_double(csv::format(v));
        CHECK(back == v);
        CHECK(std::signbit(back) == std::signbit(v));
    }
    CHECK(csv::format(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(csv::format(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(csv::format(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(std::isinf(csv::parse_double("inf")));
    CHECK(std::isnan(csv::parse_double("nan")));
    CHECK_THROWS_AS(csv::parse_double("1.0x"), InvalidInput);
}

TEST_CASE("csv writer and reader") {
    csv::Writer w({"delta", "estimate", "name"});
    w.row({csv::format(0.08), csv::format(-0.02624), "poly(x0^2)"});
    w.row({csv::format(0.01), csv::format(1.0 / 7.0), "first_coordinate"});
    CHECK_THROWS_AS(w.row({"1", "2"}), InvalidInput);
    CHECK_THROWS_AS(w.row({"1", "2", "a,b"}), InvalidInput);

    const auto t = csv::parse(w.str());
    CHECK(t.header == std::vector<std::string>{"delta", "estimate", "name"});
    REQUIRE(t.rows.size() == 2);
    CHECK(csv::parse_double(t.rows[1][t.column("estimate")]) == 1.0 / 7.0);
    CHECK(t.rows[0][2] == "poly(x0^2)");
    CHECK_THROWS_AS(t.column("missing"), InvalidInput);
    CHECK_THROWS_AS(csv::parse("a,b\n1\n"), InvalidInput);

    const auto path = std::filesystem::temp_directory_path() / "langevin_csv_roundtrip.csv";
    w.save(path);
    const auto loaded = csv::load(path);
    CHECK(loaded.rows == t.rows);
    std::filesystem::remove(path);
}
