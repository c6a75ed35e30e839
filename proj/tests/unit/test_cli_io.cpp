#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "superexp/config.hpp"
#include "superexp/error.hpp"
#include "superexp/pipeline.hpp"

using namespace superexp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("superexp_test_" + name);
    fs::remove_all(d);
    return d;
}

bool message_contains(const std::string& text, const std::string& needle) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("cosine configuration parses") {
    const RunConfig c = parse_config(
        "# sublinear cosine case\n"
        "[potential]\n"
        "family = \"opp_cos\"\n"
        "alpha = 0.3\n"
        "beta = 0.05   ; amplitude\n"
        "k = 1\n"
        "[solve]\n"
        "states = 21\n");
    CHECK(c.potential.family == Family::OppCos);
    CHECK(c.potential.alpha == 0.3);
    CHECK(c.potential.beta == 0.05);
    CHECK(c.potential.k == 1.0);
    CHECK(c.potential.gamma == 1.0);
    CHECK(c.solve.states == 21);
    CHECK_FALSE(c.sweep.has_value());
}

TEST_CASE("configuration errors carry positions") {
    try {
        parse_config("[potential]\nfamily = \"sso\"\nalpah = 2\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 1);
        CHECK(std::string(e.what()).find("alpah") != std::string::npos);
    }
    try {
        parse_config("[potential]\n  family = \"sso\"\n[grid]\npad = 1.3\npad = 2\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 5);
    }
    try {
        parse_config("[potential]\nfamily = \"sso\"\nalpha = 1e3x\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 9);
    }
    CHECK(message_contains("[potential]\nfamily = \"sso\"\nalpha = -1\n", "alpha must be positive"));
    CHECK(message_contains("[potentials]\n", "unknown section"));
    CHECK(message_contains("[grid]\npad = 1.3\n", "family is required"));
    CHECK(message_contains("[potential]\nfamily = \"sso\"\n[analysis]\ndegeneracy_window = 4\n", "degeneracy_window"));
    CHECK(message_contains("[potential]\nfamily = \"nope\"\n", "unknown family"));
}

TEST_CASE("empty analysis section keeps every default") {
    const RunConfig c = parse_config("[potential]\nfamily = \"opp_sin\"\nalpha = 0.3\nbeta = 0.05\nk = 1\n[analysis]\n");
    CHECK(c.analysis == AnalysisConfig{});
    CHECK(c.analysis.spacings);
    CHECK(c.analysis.turning_points);
    CHECK(c.analysis.fit);
    CHECK(c.analysis.state_metrics);
}

TEST_CASE("emit and parse round trip") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Family families[] = {Family::OppCos, Family::OppSin, Family::OppPhase};
    for (int trial = 0; trial < 200; ++trial) {
        RunConfig c;
        c.potential.family = families[trial % 3];
        c.potential.alpha = 0.1 + 5.0 * u(rng);
        c.potential.beta = (u(rng) - 0.5) * c.potential.alpha;
        c.potential.k = 0.1 + 3.0 * u(rng);
        c.potential.phi = 7.0 * u(rng);
        c.potential.gamma = std::exp(4.0 * (u(rng) - 0.5));
        c.grid.explicit_grid = trial % 2 == 0;
        c.grid.pad = 1.0 + u(rng);
        c.grid.points_per_wavelength = 5.0 + 40.0 * u(rng);
        c.grid.q_min = -10.0 * u(rng) - 1.0;
        c.grid.q_max = 10.0 * u(rng) + 1.0;
        c.grid.n_points = 9 + static_cast<std::size_t>(1000 * u(rng));
        c.solve.states = 1 + static_cast<std::size_t>(300 * u(rng));
        c.solve.rtol = 1e-14 * (1.0 + 100.0 * u(rng));
        c.analysis.fit = u(rng) < 0.5;
        c.analysis.fit_n_lo = 1 + static_cast<std::size_t>(20 * u(rng));
        c.analysis.degeneracy_factor = 0.01 + 0.9 * u(rng);
        c.output.directory = "run_" + std::to_string(trial);
        c.output.wavefunctions = u(rng) < 0.5;
        if (trial % 4 == 0) c.sweep = SweepConfig{"phi", 0.0, 6.0 * u(rng) + 0.1, 3 + static_cast<std::size_t>(50 * u(rng)), 2};
        const std::string text = emit_config(c);
        const RunConfig back = parse_config(text);
        CHECK(back == c);
        CHECK(emit_config(back) == text);
    }
}

TEST_CASE("shortest round-trip number formatting") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::bit_cast<double>(rng());
        if (!std::isfinite(x)) continue;
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("harmonic eigenvalue table") {
    RunConfig c = parse_config(
        "[potential]\nfamily = \"opp_cos\"\nalpha = 2\nbeta = 0\nk = 1\ngamma = 0.5\n"
        "[solve]\nstates = 3\n[analysis]\nfit = false\nstate_metrics = false\n");
    const RunResults r = run_config(c);
    const fs::path dir = scratch_dir("harmonic");
    emit_outputs(r, dir);
    std::istringstream in(slurp(dir / "eigenvalues.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,E");
    for (int n = 1; n <= 3; ++n) {
        REQUIRE(std::getline(in, line));
        const auto comma = line.find(',');
        CHECK(std::stoi(line.substr(0, comma)) == n);
        CHECK(std::stod(line.substr(comma + 1)) == doctest::Approx(n - 0.5).epsilon(1e-8));
    }
    CHECK_FALSE(std::getline(in, line));
    CHECK(slurp(dir / "spacings.csv").rfind("n,dE,dR,degenerate_flag\n", 0) == 0);
    CHECK_FALSE(fs::exists(dir / "doublets.csv"));
    fs::remove_all(dir);
}

TEST_CASE("degenerate spacing is written as nan with the flag set") {
    RunResults r;
    r.config = parse_config("[potential]\nfamily = \"opp_cos\"\nalpha = 0.3\nbeta = 0.05\nk = 1\n");
    Solution sol;
    sol.spectrum.energies = {1.0, 2.0, 2.0, 3.0};
    r.solution = sol;
    r.spacings = spacings(sol.spectrum.energies);
    const fs::path dir = scratch_dir("nanflag");
    emit_outputs(r, dir);
    CHECK(slurp(dir / "spacings.csv") == "n,dE,dR,degenerate_flag\n2,1,0,0\n3,0,nan,1\n4,1,nan,0\n");
    fs::remove_all(dir);
}

TEST_CASE("unwritable output directory raises IoError") {
    const fs::path dir = scratch_dir("blocked");
    fs::create_directories(dir);
    std::ofstream(dir / "file") << "x";
    RunResults r;
    Solution sol;
    sol.spectrum.energies = {1.0, 2.0, 3.0};
    r.solution = sol;
    CHECK_THROWS_AS(emit_outputs(r, dir / "file" / "sub"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("figure fixtures") {
    const auto ids = figure_ids();
    CHECK(ids.size() == 12);
    const auto fig6 = figure_runs("fig6");
    REQUIRE(fig6.size() == 1);
    CHECK(fig6[0].config.potential.family == Family::OppCos);
    CHECK(fig6[0].config.potential.alpha == 0.3);
    CHECK(fig6[0].config.potential.beta == 0.05);
    CHECK(fig6[0].config.solve.states == 21);
    for (const auto& id : ids) {
        for (const auto& run : figure_runs(id)) CHECK(parse_config(emit_config(run.config)) == run.config);
    }
    CHECK_THROWS(figure_runs("fig13"));
}
