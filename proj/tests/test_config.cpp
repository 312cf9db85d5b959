#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "quapi/config.hpp"
#include "quapi/csv.hpp"

using namespace quapi;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "config_test_" + std::to_string(counter++) + ".ini";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

const char* kGoodRun =
    "[bath]\n"
    "family = piezoelectric\n"
    "g = 0.035\n"
    "omega_d = 0.02\n"
    "omega_l = 0.5\n"
    "temperature_mK = 30\n"
    "[system]\n"
    "t_c = 0.05\n"
    "[numerics]\n"
    "delta_t = 10\n"
    "n_steps = 40\n"
    "dkmax = 1\n";

}  // namespace

TEST_CASE("run config parses and resolves") {
    TempFile f(kGoodRun);
    const auto cfg = parse_run_config(f.path);
    CHECK(cfg.bath.has_value());
    CHECK_FALSE(cfg.material.has_value());
    CHECK(cfg.resolve_t_c() == doctest::Approx(0.05));
    const auto bath = cfg.make_bath();
    CHECK(bath.beta == doctest::Approx(254.647).epsilon(1e-3));
    CHECK(bath.quadrature.omega_max == doctest::Approx(5.0));
}

TEST_CASE("t_c ratio resolution") {
    std::string s = kGoodRun;
    s.replace(s.find("t_c = 0.05"), 10, "t_c_ratio = 0.1");
    TempFile f(s);
    const auto cfg = parse_run_config(f.path);
    CHECK(cfg.resolve_t_c() == doctest::Approx(0.05));
}

TEST_CASE("unknown keys are rejected with the line number") {
    TempFile f(std::string(kGoodRun) + "banana = 1\n");
    try {
        parse_run_config(f.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("banana") != std::string::npos);
        CHECK(msg.find("13") != std::string::npos);  // line number
    }
}

TEST_CASE("malformed numeric names the field") {
    std::string s = kGoodRun;
    s.replace(s.find("g = 0.035"), 9, "g = abc");
    TempFile f(s);
    try {
        parse_run_config(f.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bath.g") != std::string::npos);
    }
}

TEST_CASE("conflicting or missing sections fail validation") {
    TempFile both(std::string(kGoodRun) +
                  "[material]\nfamily = deformation\nM = 1.69\nXi = 12.5\n"
                  "rho = 5300\ns = 5000\nx = 0.6\nd = 250\nl = 10\n");
    CHECK_THROWS_AS(parse_run_config(both.path), ValidationError);

    TempFile none(
        "[system]\nt_c = 0.05\n[numerics]\ndelta_t = 10\nn_steps = 4\ndkmax = "
        "1\n");
    CHECK_THROWS_AS(parse_run_config(none.path), ValidationError);

    std::string two_tc = kGoodRun;
    two_tc += "[system2]\n";  // unknown section contents trigger too
    std::string s = kGoodRun;
    s.replace(s.find("t_c = 0.05"), 10, "t_c = 0.05\nt_c_ratio = 0.1");
    TempFile conflict(s);
    CHECK_THROWS_AS(parse_run_config(conflict.path), ValidationError);
}

TEST_CASE("material section drives geometry derivation") {
    TempFile f(
        "[material]\n"
        "family = deformation\n"
        "M = 1.69\nXi = 12.5\nrho = 5300\ns = 5000\nx = 0.6\nd = 250\nl = 10\n"
        "temperature_mK = 30\n"
        "[system]\nt_c_ratio = 0.1\n"
        "[numerics]\ndelta_t = 20\nn_steps = 10\ndkmax = 1\n");
    const auto cfg = parse_run_config(f.path);
    const auto model = cfg.resolve_model();
    CHECK(model.family == BathFamily::Deformation);
    CHECK(model.omega_l == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(model.g == doctest::Approx(0.029).epsilon(0.02));
    CHECK(cfg.resolve_t_c() == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("serialized config re-parses to the same effective values") {
    TempFile f(kGoodRun);
    const auto cfg = parse_run_config(f.path);
    TempFile f2(cfg.serialize());
    const auto cfg2 = parse_run_config(f2.path);
    CHECK(cfg2.resolve_model().g == cfg.resolve_model().g);
    CHECK(cfg2.resolve_t_c() == cfg.resolve_t_c());
    CHECK(cfg2.numerics.delta_t == cfg.numerics.delta_t);
    CHECK(cfg2.numerics.n_steps == cfg.numerics.n_steps);
    CHECK(cfg2.make_bath().quadrature.abs_tol ==
          cfg.make_bath().quadrature.abs_tol);
}

TEST_CASE("sweep config: axes, cells, cap") {
    TempFile f(std::string(kGoodRun) +
               "[sweep]\nsystem.t_c = 0.03, 0.05, 0.07\nbath.omega_l = 0.5, "
               "0.7\n");
    const auto sw = parse_sweep_config(f.path);
    CHECK(sw.cell_count() == 6);
    // row-major: last axis fastest
    const auto v0 = sw.cell_values(0);
    const auto v1 = sw.cell_values(1);
    CHECK(v0[0] == doctest::Approx(0.03));
    CHECK(v0[1] == doctest::Approx(0.5));
    CHECK(v1[1] == doctest::Approx(0.7));
    const auto cell = sw.cell_config(5);
    CHECK(cell.resolve_t_c() == doctest::Approx(0.07));
    CHECK(cell.resolve_model().omega_l == doctest::Approx(0.7));

    TempFile bad(std::string(kGoodRun) + "[sweep]\nbath.nonsense = 1, 2\n");
    CHECK_THROWS_AS(parse_sweep_config(bad.path), ParseError);

    TempFile over(std::string(kGoodRun) +
                  "[sweep]\ncell_cap = 2\nsystem.t_c = 0.03, 0.05, 0.07\n");
    CHECK_THROWS_AS(parse_sweep_config(over.path), CapacityError);
}

TEST_CASE("figures config defaults and overrides") {
    TempFile f("[figures]\nresponse_samples = 41\n");
    const auto fc = parse_figures_config(f.path);
    CHECK(fc.g_pz == doctest::Approx(0.035));
    CHECK(fc.g_df == doctest::Approx(0.029));
    CHECK(fc.response_samples == 41);
    TempFile bad("[figures]\nresponse_samples = 1\n");
    CHECK_THROWS_AS(parse_figures_config(bad.path), ValidationError);
}

TEST_CASE("csv float formatting") {
    CHECK(format_sci(0.0) == "0.00000000000e+00");
    CHECK(format_sci(-0.0) == "0.00000000000e+00");
    CHECK(format_sci(1.0) == "1.00000000000e+00");
    CHECK(format_sci(-2.5e-13) == "-2.50000000000e-13");
    // 12 significant digits
    CHECK(format_sci(1.0 / 3.0) == "3.33333333333e-01");
}
