#include <catch_amalgamated.hpp>

#include <sstream>

#include "spinforce/config.hpp"
#include "spinforce/csv.hpp"

using namespace spinforce;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

RunConfig parse(const std::string& text, RunConfig base = default_run_config()) {
    std::istringstream in(text);
    return parse_run_config(in, std::move(base));
}

std::vector<std::string> parse_errors(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

}  // namespace

TEST_CASE("defaults are the published configuration", "[config]") {
    const RunConfig rc = default_run_config();
    const auto& ex = rc.experiment;
    CHECK_THAT(ex.source.radius, WithinRel(250e-6, 1e-15));
    CHECK_THAT(ex.source.radius_uncertainty, WithinRel(2.5e-6, 1e-15));
    CHECK(ex.source.nucleon_density == 1.33e30);
    CHECK_THAT(ex.vib.d0, WithinRel(0.5e-6, 1e-15));
    CHECK_THAT(ex.vib.d0_uncertainty, WithinRel(0.1e-6, 1e-15));
    CHECK_THAT(ex.vib.amplitude, WithinRel(41.1e-9, 1e-15));
    CHECK_THAT(ex.vib.amplitude_uncertainty, WithinRel(0.1e-9, 1e-15));
    CHECK(ex.vib.omega_m == 1.18e6);
    CHECK_THAT(std::cos(ex.seq.theta), WithinRel(1.0 / std::sqrt(3.0), 1e-15));
    CHECK(ex.phase_bound == 0.036);
    CHECK(ex.seq.kind == SequenceKind::SpinEcho);
    CHECK(make_grid(rc.grid).size() == 60);
    CHECK(config_violations(rc).empty());
    CHECK(default_run_config(Scenario::Projected).experiment == projected_scenario());
}

TEST_CASE("quantities with unit suffixes", "[config]") {
    const RunConfig rc = parse(
        "# comment\n"
        "d0 = 0.5um\n"
        "R = 0.3 mm\n"
        "dR = 2500nm\n"
        "rho = 1.33e24/cm3\n"
        "A = 41.1 nm\n"
        "dA = 0.1nm\n"
        "omega_m = 1.18 Mrad/s\n"
        "theta = 45deg\n"
        "phase_bound = 36 mrad\n"
        "lambda_min = 0.1um\n"
        "lambda_max = 23 \xC2\xB5m\n"
        "lambda_points = 5\n"
        "lambda_spacing = linear\n"
        "\n"
        "seed = 99\n"
        "threads = 3\n");
    const auto& ex = rc.experiment;
    CHECK_THAT(ex.vib.d0, WithinRel(0.5e-6, 1e-15));
    CHECK_THAT(ex.source.radius, WithinRel(0.3e-3, 1e-15));
    CHECK_THAT(ex.source.radius_uncertainty, WithinRel(2.5e-6, 1e-15));
    CHECK_THAT(ex.source.nucleon_density, WithinRel(1.33e30, 1e-15));
    CHECK_THAT(ex.vib.omega_m, WithinRel(1.18e6, 1e-15));
    CHECK_THAT(ex.seq.theta, WithinRel(kPi / 4, 1e-15));
    CHECK_THAT(ex.phase_bound, WithinRel(0.036, 1e-15));
    CHECK_THAT(rc.grid.max, WithinRel(23e-6, 1e-15));
    CHECK_FALSE(rc.grid.logarithmic);
    CHECK(rc.seed == 99);
    CHECK(rc.readout.seed == 99);
    CHECK(rc.threads == 3u);
    // the box follows the parsed values
    CHECK(ex.nuisance.radius == Interval::around(ex.source.radius, ex.source.radius_uncertainty));
}

TEST_CASE("every violation is reported at once", "[config][errors]") {
    const auto errors = parse_errors(
        "d0 = -1um\n"
        "radius 250um\n"
        "colour = blue\n"
        "rho = 1e30/furlong\n"
        "d0 = 1um\n"
        "sequence = ramsey\n"
        "lambda_points = many\n");
    REQUIRE(errors.size() == 6);
    CHECK_THAT(errors[0], ContainsSubstring("line 2"));
    CHECK_THAT(errors[1], ContainsSubstring("unknown key 'colour'"));
    CHECK_THAT(errors[2], ContainsSubstring("rho"));
    CHECK_THAT(errors[3], ContainsSubstring("already set on line 1"));
    CHECK_THAT(errors[4], ContainsSubstring("sequence"));
    CHECK_THAT(errors[5], ContainsSubstring("lambda_points"));

    CHECK_THAT(parse_errors("A = 1nm\namplitude = 2nm\n").at(0), ContainsSubstring("already set"));
}

TEST_CASE("semantic violations are collected", "[config][errors]") {
    RunConfig rc = parse("d0 = -1um\nlambda_points = 0\nrel_tol = 1\ncontrast = 2\nphase_bound = 0\n");
    const auto v = config_violations(rc);
    CHECK(v.size() >= 5);
    auto has = [&](const std::string& s) {
        return std::any_of(v.begin(), v.end(), [&](const std::string& x) { return x.find(s) != std::string::npos; });
    };
    CHECK(has("d0 must be positive"));
    CHECK(has("grid is empty"));
    CHECK(has("rel_tol"));
    CHECK(has("contrast"));
    CHECK(has("phase_bound"));
    CHECK_THROWS_AS(validate(rc), ConfigError);
}

TEST_CASE("dumped configuration reparses identically", "[config]") {
    for (Scenario s : {Scenario::Current, Scenario::Projected}) {
        RunConfig rc = default_run_config(s);
        CHECK(parse(dump_run_config(rc)) == rc);
        rc.experiment.vib.d0 = 0.1 + 0.2;  // not exactly representable in short decimal
        rc.experiment.seq.theta_uncertainty = 0.01;
        rc.experiment.nuisance = nuisance_box(rc.experiment.source, rc.experiment.vib, rc.experiment.seq);
        rc.threads = 2;
        rc.seed = 123456789012345ULL;
        rc.readout.seed = rc.seed;
        rc.output_path = "out dir/curve.csv";
        CHECK(parse(dump_run_config(rc)) == rc);
        // parsing on top of a different base still lands on the dumped values
        CHECK(parse(dump_run_config(rc), default_run_config(Scenario::Projected)).experiment == rc.experiment);
    }
}

TEST_CASE("missing config file", "[config][errors]") {
    CHECK_THROWS_AS(load_run_config("/nonexistent/spinforce.conf"), ConfigError);
}

TEST_CASE("curve CSV", "[csv]") {
    ExclusionCurve c;
    c.points = {{1e-7, 1.97, 3.25e-9},
                {2e-5, 9.8e-3, 5.597312345678e-15},
                {3e-5, 6.5e-3, std::numeric_limits<double>::infinity()}};
    std::ostringstream os;
    write_curve_csv(os, c);
    const std::string s = os.str();
    CHECK(s.rfind("lambda_m,alp_mass_ev,g_bound\n", 0) == 0);
    CHECK(s.find("inf") == std::string::npos);
    CHECK(s.find('\r') == std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') == 3);
    CHECK_THAT(s, ContainsSubstring("2.000000000000e-05,9.800000000000e-03,5.597312345678e-15\n"));
}

TEST_CASE("readout CSV round trip", "[csv]") {
    ReadoutModel m;
    m.shots = 1000;
    const auto r = simulate_readout(0.2, uniform_phase_grid(6), m);
    std::stringstream ss;
    write_readout_csv(ss, r);
    const auto back = read_readout_csv(ss);
    REQUIRE(back.points.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK_THAT(back.points[i].phi_mw, WithinRel(r.points[i].phi_mw, 1e-12));
        CHECK_THAT(back.points[i].mean_counts, WithinRel(r.points[i].mean_counts, 1e-12));
        CHECK_THAT(back.points[i].std_error, WithinRel(r.points[i].std_error, 1e-12));
    }

    std::istringstream two("phi_mw_rad,mean_counts\r\n0,1.5\r\n1,1.2\r\n");
    const auto measured = read_readout_csv(two);
    REQUIRE(measured.points.size() == 2);
    CHECK(measured.points[1].std_error == 0.0);
}

TEST_CASE("malformed readout CSV names the line", "[csv][errors]") {
    auto message = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_readout_csv(in, "scan.csv");
        } catch (const CsvError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK_THAT(message(""), ContainsSubstring("scan.csv: empty"));
    CHECK_THAT(message("phase,counts\n"), ContainsSubstring("scan.csv:1"));
    CHECK_THAT(message("phi_mw_rad,mean_counts,std_error\n0,1,0.1\n1,abc,0.1\n"), ContainsSubstring("scan.csv:3"));
    CHECK_THAT(message("phi_mw_rad,mean_counts,std_error\n0,1\n"), ContainsSubstring("scan.csv:2: expected 3"));
    CHECK_THAT(message("phi_mw_rad,mean_counts,std_error\n0,1,nan\n"), ContainsSubstring("scan.csv:2"));
    CHECK_THAT(message("phi_mw_rad,mean_counts,std_error\n0,1x,0.1\n"), ContainsSubstring("scan.csv:2"));
}
