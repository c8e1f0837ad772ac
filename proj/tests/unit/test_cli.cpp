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


#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <optional>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "langevin/cli.hpp"
#include "langevin/config.hpp"
#include "langevin/csv.hpp"
#include "json.hpp"

using namespace langevin;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("langevin_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }

    fs::path write(const std::string& file, const std::string& text) const {
        std::ofstream(dir / file, std::ios::binary) << text;
        return dir / file;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const std::string kHarmonic =
    "potential.kind = harmonic\n"
    "scheme.kind = unstopped\n"
    "scheme.delta = 0.05\n"
    "run.n_chains = 200\n"
    "run.n_steps = 40\n"
    "run.seed = 7\n"
    "run.init_x = 1\n";

struct Result {
    int code;
    std::string out, err;
};

template <class Fn>
Result run(Fn fn, const fs::path& cfg, const fs::path& out_dir, std::optional<unsigned> threads = {}) {
    CliOptions opts;
    opts.config = cfg;
    opts.out = out_dir;
    opts.threads = threads;
    std::ostringstream out, err;
    const int code = fn(opts, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("misspelled key exits with the config code") {
    Scratch s("typo");
    const auto cfg = s.write("a.cfg", kHarmonic + "scheme.deltta = 0.01\n");
    const auto r = run(cmd_simulate, cfg, s.dir / "out");
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("scheme.deltta") != std::string::npos);
    CHECK_FALSE(fs::exists(s.dir / "out" / "manifest.json"));
}

TEST_CASE("missing config file exits with the config code") {
    Scratch s("missing");
    CHECK(run(cmd_simulate, s.dir / "nope.cfg", s.dir / "out").code == kExitConfig);
    CHECK(run(cmd_simulate, fs::path{}, s.dir / "out").code == kExitConfig);
}

TEST_CASE("weak-error rejects a grid that does not divide t") {
    Scratch s("grid");
    const auto cfg = s.write("a.cfg", kHarmonic +
                                          "analysis.t = 1\n"
                                          "analysis.delta_grid = 0.08, 0.04, 0.02\n");
    CHECK(run(cmd_weak_error, cfg, s.dir / "out").code == kExitConfig);
}

TEST_CASE("weak-error rejects a single-step grid") {
    Scratch s("single");
    const auto cfg = s.write("a.cfg", kHarmonic +
                                          "analysis.t = 1\n"
                                          "analysis.delta_grid = 0.05\n");
    CHECK(run(cmd_weak_error, cfg, s.dir / "out").code == kExitConfig);
}

TEST_CASE("weak-error writes a report and manifest") {
    Scratch s("weak");
    const auto cfg = s.write("a.cfg",
                             "potential.kind = harmonic\n"
                             "scheme.kind = unstopped\n"
                             "run.n_chains = 20000\n"
                             "run.seed = 3\n"
                             "run.init_x = 1\n"
                             "analysis.t = 2\n"
                             "analysis.delta_grid = 0.2, 0.1, 0.05\n");
    const auto r = run(cmd_weak_error, cfg, s.dir / "out");
    REQUIRE(r.code == kExitOk);
    const auto t = csv::load(s.dir / "out" / "weak_error.csv");
    CHECK(t.rows.size() == 3);
    CHECK(t.column("delta") == 0);
    CHECK(fs::exists(s.dir / "out" / "manifest.json"));
}

TEST_CASE("colliding pair exits with the escape code") {
    Scratch s("collide");
    const auto cfg = s.write("a.cfg",
                             "potential.kind = lennard-jones-confined\n"
                             "potential.n_particles = 2\n"
                             "potential.space_dim = 1\n"
                             "scheme.kind = unstopped\n"
                             "scheme.delta = 0.05\n"
                             "scheme.beta = 1\n"
                             "run.n_chains = 8\n"
                             "run.n_steps = 200\n"
                             "run.seed = 1\n"
                             "run.init_x = -0.15, 0.15\n"
                             "run.init_y = 5, -5\n");
    const auto r = run(cmd_simulate, cfg, s.dir / "out");
    CHECK(r.code == kExitEscaped);
    CHECK(r.err.find("escaped=8/8") != std::string::npos);
}

TEST_CASE("lyapunov-probe validation and output") {
    Scratch s("lyap");
    const std::string base =
        "potential.kind = harmonic\n"
        "scheme.delta = 0.01\n"
        "scheme.l = 0.5\n"
        "lyapunov.b = 0.5\n"
        "lyapunov.probe_x = 0.5; 1\n"
        "lyapunov.probe_y = 2.5; 2\n"
        "run.seed = 5\n";
    const auto bad = s.write("bad.cfg", base + "lyapunov.n_samples = 1\n");
    CHECK(run(cmd_lyapunov_probe, bad, s.dir / "bad").code == kExitConfig);

    const auto good = s.write("good.cfg", base + "lyapunov.n_samples = 2000\n");
    const auto r = run(cmd_lyapunov_probe, good, s.dir / "good");
    REQUIRE(r.code == kExitOk);
    const auto t = csv::load(s.dir / "good" / "lyapunov_drift.csv");
    CHECK(t.rows.size() == 2);
    for (const auto& row : t.rows) CHECK(csv::parse_double(row[t.column("Vb")]) > 1.0);
}

TEST_CASE("check-potential with an empty ladder prints only the header") {
    Scratch s("ladder");
    const auto cfg = s.write("a.cfg", "potential.kind = harmonic\nanalysis.probe_ladder =\n");
    const auto r = run(cmd_check_potential, cfg, {});
    CHECK(r.code == kExitOk);
    const auto t = csv::parse(r.out);
    CHECK(t.rows.empty());
    CHECK(t.header.front() == "probe");

    const auto cfg2 = s.write("b.cfg", "potential.kind = harmonic\nanalysis.probe_ladder = 1, 10\n");
    const auto r2 = run(cmd_check_potential, cfg2, {});
    REQUIRE(r2.code == kExitOk);
    const auto t2 = csv::parse(r2.out);
    REQUIRE(t2.rows.size() == 2);
    CHECK(csv::parse_double(t2.rows[1][t2.column("hessian_ratio")]) == doctest::Approx(0.01));
}

TEST_CASE("manifest records the config hash and outputs") {
    Scratch s("manifest");
    const auto cfg = s.write("a.cfg", kHarmonic + "observables = hamiltonian, poly(x0^2)\n");
    REQUIRE(run(cmd_simulate, cfg, s.dir / "out").code == kExitOk);
    const auto m = nlohmann::json::parse(slurp(s.dir / "out" / "manifest.json"));
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(slurp(cfg))));
    CHECK(m["config_hash"].get<std::string>() == hex);
    CHECK(m["master_seed"].get<std::uint64_t>() == 7);
    CHECK(m["tool_version"].get<std::string>() == kToolVersion);
    CHECK(m["outputs"].size() == 2);
    CHECK(m["wall_clock_seconds"].get<double>() >= 0.0);
}

TEST_CASE("simulate output does not depend on the thread count") {
    Scratch s("threads");
    const auto cfg = s.write("a.cfg", kHarmonic + "run.record_stride = 10\n"
                                                  "observables = hamiltonian, poly(x0*y0)\n");
    REQUIRE(run(cmd_simulate, cfg, s.dir / "t1", 1u).code == kExitOk);
    REQUIRE(run(cmd_simulate, cfg, s.dir / "t4", 4u).code == kExitOk);
    for (const char* f : {"samples.csv", "ensemble.csv"}) {
        const auto a = slurp(s.dir / "t1" / f);
        CHECK(!a.empty());
        CHECK(a == slurp(s.dir / "t4" / f));
    }
    const auto t = csv::load(s.dir / "t1" / "samples.csv");
    CHECK(t.header == std::vector<std::string>{"chain", "step", "H", "hamiltonian", "poly(x0*y0)"});
    CHECK(csv::parse_double(t.rows[0][t.column("H")]) == csv::parse_double(t.rows[0][3]));
}

TEST_CASE("invariant-bias emits a stationarity check for the harmonic potential") {
    Scratch s("bias");
    const auto cfg = s.write("a.cfg",
                             "potential.kind = harmonic\n"
                             "scheme.kind = unstopped\n"
                             "run.n_chains = 1\n"
                             "run.n_steps = 200000\n"
                             "run.record_stride = 100000\n"
                             "run.seed = 11\n"
                             "analysis.observable = poly(x0^2)\n"
                             "analysis.delta_grid = 0.2, 0.1, 0.05\n"
                             "analysis.gibbs_samples = 100000\n");
    const auto r = run(cmd_invariant_bias, cfg, s.dir / "out");
    REQUIRE(r.code == kExitOk);
    const auto st = csv::load(s.dir / "out" / "stationarity.csv");
    REQUIRE(st.rows.size() == 1);
    CHECK(st.rows[0][st.column("verdict")] == "pass");
    CHECK(csv::load(s.dir / "out" / "invariant_bias.csv").rows.size() == 3);
}

TEST_CASE("executable maps errors onto exit codes") {
    Scratch s("exe");
    const auto bad = s.write("bad.cfg", kHarmonic + "scheme.deltta = 0.01\n");
    const auto good = fs::path(LANGEVIN_CONFIG_DIR) / "harmonic_simulate.cfg";
    auto call = [&](const std::string& args) {
        const std::string cmd = std::string("\"") + LANGEVIN_CLI_PATH + "\" " + args + " > \"" +
                                (s.dir / "log.txt").string() + "\" 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };
    CHECK(call("simulate --config \"" + bad.string() + "\" --out \"" + (s.dir / "o1").string() + "\"") == 2);
    CHECK(call("simulate --config \"" + good.string() + "\" --out \"" + (s.dir / "o2").string() +
               "\" --threads 2") == 0);
    CHECK(fs::exists(s.dir / "o2" / "ensemble.csv"));
    CHECK(call("no-such-command") != 0);
}
