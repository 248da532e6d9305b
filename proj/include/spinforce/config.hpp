#pragma once

// Run configuration for the command-line tool: a flat `key = value` text
// format with unit suffixes, e.g.
//
//     # current experiment
//     d0 = 0.5um
//     rho = 1.33e30/m3
//     theta = 54.7356deg
//
// Blank lines and lines starting with '#' are ignored. A bare number is read
// in SI base units. Parsing and validation collect every violation before
// reporting, so one run lists all problems in a file.

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spinforce/limits.hpp"
#include "spinforce/readout.hpp"

namespace spinforce {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& x : v) s += "\n  - " + x;
        return s;
    }
    std::vector<std::string> violations_;
};

struct LambdaGridSpec {
    double min = 0.05 * units::um;
    double max = 50.0 * units::um;
    int points = 60;
    bool logarithmic = true;

    bool operator==(const LambdaGridSpec&) const = default;
};

enum class Scenario { Current, Projected };

struct RunConfig {
    ExperimentConfig experiment = current_experiment();
    LambdaGridSpec grid;
    std::string output_path = "exclusion_curve.csv";
    double rel_tol = 1e-9;
    std::uint64_t seed = 1;
    std::optional<unsigned> threads;
    ReadoutModel readout;
    int phi_mw_points = 12;

    bool operator==(const RunConfig&) const = default;
};

inline RunConfig default_run_config(Scenario scenario = Scenario::Current) {
    RunConfig rc;
    if (scenario == Scenario::Projected) rc.experiment = projected_scenario();
    return rc;
}

inline std::vector<double> make_grid(const LambdaGridSpec& g) {
    return g.logarithmic ? log_grid(g.min, g.max, g.points) : linear_grid(g.min, g.max, g.points);
}

namespace config_detail {

enum class Dim { Length, Density, Angle, AngularFrequency, Dimensionless };

struct Unit {
    std::string_view suffix;
    double scale;
};

inline const std::vector<Unit>& units_for(Dim d) {
    static const std::vector<Unit> length{{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6},
                                          {"\xC2\xB5m", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}};
    static const std::vector<Unit> density{{"/m3", 1.0}, {"/cm3", 1e6}, {"m^-3", 1.0}, {"cm^-3", 1e6}};
    static const std::vector<Unit> angle{{"rad", 1.0}, {"mrad", 1e-3}, {"deg", kPi / 180.0}};
    static const std::vector<Unit> freq{{"rad/s", 1.0}, {"/s", 1.0}, {"krad/s", 1e3}, {"Mrad/s", 1e6}};
    static const std::vector<Unit> none{};
    switch (d) {
        case Dim::Length: return length;
        case Dim::Density: return density;
        case Dim::Angle: return angle;
        case Dim::AngularFrequency: return freq;
        case Dim::Dimensionless: return none;
    }
    return none;
}

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_quantity(std::string_view text, Dim dim) {
    const std::string s(trim(text));
    if (s.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
    const std::string_view suffix = trim(std::string_view(end));
    if (suffix.empty()) return v;
    for (const auto& u : units_for(dim))
        if (u.suffix == suffix) return v * u.scale;
    return std::nullopt;
}

template <class Int>
std::optional<Int> parse_integer(std::string_view text) {
    const std::string s(trim(text));
    if (s.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) return std::nullopt;
    return static_cast<Int>(v);
}

// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace config_detail

// Applies `key = value` lines on top of `base`. Throws ConfigError listing
// every unparsable line, unknown key, repeated key and invalid value.
inline RunConfig parse_run_config(std::istream& in, RunConfig base = default_run_config()) {
    using namespace config_detail;
    std::vector<std::string> errors;
    std::map<std::string, int> seen;
    RunConfig rc = std::move(base);
    auto& ex = rc.experiment;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        const std::string where = "line " + std::to_string(lineno);
        if (eq == std::string_view::npos) {
            errors.push_back(where + ": expected 'key = value'");
            continue;
        }
        std::string key(trim(t.substr(0, eq)));
        if (key == "R") key = "radius";
        else if (key == "dR") key = "radius_uncertainty";
        else if (key == "A") key = "amplitude";
        else if (key == "dA") key = "amplitude_uncertainty";
        const std::string_view val = trim(t.substr(eq + 1));
        if (auto [it, fresh] = seen.emplace(key, lineno); !fresh) {
            errors.push_back(where + ": key '" + key + "' already set on line " + std::to_string(it->second));
            continue;
        }
        auto bad = [&](const std::string& what) {
            errors.push_back(where + ": " + key + " = '" + std::string(val) + "': " + what);
        };
        auto quantity = [&](double& target, Dim dim) {
            if (auto v = parse_quantity(val, dim)) target = *v;
            else bad("not a number with a recognised unit");
        };

        if (key == "label") ex.label = std::string(val);
        else if (key == "source_label") ex.source.label = std::string(val);
        else if (key == "radius") quantity(ex.source.radius, Dim::Length);
        else if (key == "radius_uncertainty") quantity(ex.source.radius_uncertainty, Dim::Length);
        else if (key == "rho") quantity(ex.source.nucleon_density, Dim::Density);
        else if (key == "d0") quantity(ex.vib.d0, Dim::Length);
        else if (key == "d0_uncertainty") quantity(ex.vib.d0_uncertainty, Dim::Length);
        else if (key == "amplitude") quantity(ex.vib.amplitude, Dim::Length);
        else if (key == "amplitude_uncertainty") quantity(ex.vib.amplitude_uncertainty, Dim::Length);
        else if (key == "omega_m") quantity(ex.vib.omega_m, Dim::AngularFrequency);
        else if (key == "theta") quantity(ex.seq.theta, Dim::Angle);
        else if (key == "theta_uncertainty") quantity(ex.seq.theta_uncertainty, Dim::Angle);
        else if (key == "phase_bound") quantity(ex.phase_bound, Dim::Angle);
        else if (key == "sequence") {
            if (val == "echo") ex.seq.kind = SequenceKind::SpinEcho;
            else if (val == "cpmg") ex.seq.kind = SequenceKind::Cpmg;
            else bad("expected 'echo' or 'cpmg'");
        } else if (key == "cpmg_pulses") {
            if (auto v = parse_integer<int>(val)) ex.seq.cpmg_pulses = *v;
            else bad("not an integer");
        } else if (key == "lambda_min") quantity(rc.grid.min, Dim::Length);
        else if (key == "lambda_max") quantity(rc.grid.max, Dim::Length);
        else if (key == "lambda_points") {
            if (auto v = parse_integer<int>(val)) rc.grid.points = *v;
            else bad("not an integer");
        } else if (key == "lambda_spacing") {
            if (val == "log") rc.grid.logarithmic = true;
            else if (val == "linear") rc.grid.logarithmic = false;
            else bad("expected 'log' or 'linear'");
        } else if (key == "output") rc.output_path = std::string(val);
        else if (key == "rel_tol") quantity(rc.rel_tol, Dim::Dimensionless);
        else if (key == "seed") {
            if (auto v = parse_integer<long long>(val); v && *v >= 0) rc.seed = static_cast<std::uint64_t>(*v);
            else bad("not a non-negative integer");
        } else if (key == "threads") {
            if (auto v = parse_integer<long long>(val); v && *v >= 1) rc.threads = static_cast<unsigned>(*v);
            else bad("not a positive integer");
        } else if (key == "photons_per_shot") quantity(rc.readout.photons_per_shot, Dim::Dimensionless);
        else if (key == "contrast") quantity(rc.readout.contrast, Dim::Dimensionless);
        else if (key == "baseline") quantity(rc.readout.baseline, Dim::Dimensionless);
        else if (key == "shots") {
            if (auto v = parse_integer<std::int64_t>(val)) rc.readout.shots = *v;
            else bad("not an integer");
        } else if (key == "phi_mw_points") {
            if (auto v = parse_integer<int>(val)) rc.phi_mw_points = *v;
            else bad("not an integer");
        } else {
            errors.push_back(where + ": unknown key '" + key + "'");
        }
    }
    rc.readout.seed = rc.seed;
    ex.nuisance = nuisance_box(ex.source, ex.vib, ex.seq);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return rc;
}

// Every violated constraint, empty when the configuration is usable.
inline std::vector<std::string> config_violations(const RunConfig& rc) {
    std::vector<std::string> v;
    const auto& ex = rc.experiment;
    const auto& s = ex.source;
    const auto& vib = ex.vib;
    if (!(s.radius > 0.0)) v.push_back("radius must be positive");
    if (!(s.radius_uncertainty >= 0.0 && s.radius_uncertainty < s.radius)) v.push_back("radius_uncertainty must lie in [0, radius)");
    if (!(s.nucleon_density > 0.0)) v.push_back("rho must be positive");
    if (!(vib.d0 > 0.0)) v.push_back("d0 must be positive");
    if (!(vib.d0_uncertainty >= 0.0 && vib.d0_uncertainty < vib.d0)) v.push_back("d0_uncertainty must lie in [0, d0)");
    if (!(vib.amplitude >= 0.0)) v.push_back("amplitude must be non-negative");
    if (!(vib.amplitude_uncertainty >= 0.0 && vib.amplitude_uncertainty <= vib.amplitude))
        v.push_back("amplitude_uncertainty must lie in [0, amplitude]");
    if (!(vib.omega_m > 0.0)) v.push_back("omega_m must be positive");
    if (!(ex.seq.theta >= 0.0 && ex.seq.theta <= kPi / 2)) v.push_back("theta must lie in [0, pi/2]");
    if (!(ex.seq.theta_uncertainty >= 0.0)) v.push_back("theta_uncertainty must be non-negative");
    if (ex.seq.kind == SequenceKind::Cpmg && ex.seq.cpmg_pulses < 1) v.push_back("cpmg_pulses must be at least 1");
    if (ex.seq.kind == SequenceKind::Ramsey) v.push_back("sequence must be echo or cpmg");
    if (!(ex.phase_bound > 0.0)) v.push_back("phase_bound must be positive");

    const auto& g = rc.grid;
    if (g.points < 1) v.push_back("lambda_points must be at least 1 (grid is empty)");
    if (!(g.min >= kMinGridLambda)) v.push_back("lambda_min must be at least 10 nm");
    if (!(g.max <= kMaxGridLambda)) v.push_back("lambda_max must be at most 10 cm");
    if (g.points > 1 && !(g.min < g.max)) v.push_back("lambda_min must be below lambda_max");
    if (g.points == 1 && !(g.min <= g.max)) v.push_back("lambda_min must not exceed lambda_max");

    if (rc.output_path.empty()) v.push_back("output must not be empty");
    if (!(rc.rel_tol >= kMinRelTol && rc.rel_tol <= kMaxRelTol)) v.push_back("rel_tol must lie in [1e-10, 1e-3]");
    if (rc.threads && *rc.threads < 1) v.push_back("threads must be positive");
    const auto& r = rc.readout;
    if (!(r.photons_per_shot >= 0.0)) v.push_back("photons_per_shot must be non-negative");
    if (!(r.contrast >= 0.0 && r.contrast <= 1.0)) v.push_back("contrast must lie in [0, 1]");
    if (!(r.baseline >= 0.0)) v.push_back("baseline must be non-negative");
    if (r.shots < 1) v.push_back("shots must be positive");
    if (rc.phi_mw_points < 3) v.push_back("phi_mw_points must be at least 3");
    return v;
}

inline void validate(const RunConfig& rc) {
    if (auto v = config_violations(rc); !v.empty()) throw ConfigError(std::move(v));
}

inline RunConfig load_run_config(const std::string& path, RunConfig base = default_run_config()) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    return parse_run_config(in, std::move(base));
}

// Writes a config that parses back to exactly `rc` (17 significant digits, SI
// suffixes). The nuisance box is derived, so it is not written.
inline std::string dump_run_config(const RunConfig& rc) {
    using config_detail::format_double;
    const auto& ex = rc.experiment;
    std::ostringstream os;
    os << "# spinforce run configuration (SI units)\n";
    os << "label = " << ex.label << "\n";
    os << "source_label = " << ex.source.label << "\n";
    os << "radius = " << format_double(ex.source.radius) << "m\n";
    os << "radius_uncertainty = " << format_double(ex.source.radius_uncertainty) << "m\n";
    os << "rho = " << format_double(ex.source.nucleon_density) << "/m3\n";
    os << "d0 = " << format_double(ex.vib.d0) << "m\n";
    os << "d0_uncertainty = " << format_double(ex.vib.d0_uncertainty) << "m\n";
    os << "amplitude = " << format_double(ex.vib.amplitude) << "m\n";
    os << "amplitude_uncertainty = " << format_double(ex.vib.amplitude_uncertainty) << "m\n";
    os << "omega_m = " << format_double(ex.vib.omega_m) << "rad/s\n";
    os << "sequence = " << (ex.seq.kind == SequenceKind::Cpmg ? "cpmg" : "echo") << "\n";
    os << "cpmg_pulses = " << ex.seq.cpmg_pulses << "\n";
    os << "theta = " << format_double(ex.seq.theta) << "rad\n";
    os << "theta_uncertainty = " << format_double(ex.seq.theta_uncertainty) << "rad\n";
    os << "phase_bound = " << format_double(ex.phase_bound) << "rad\n";
    os << "lambda_min = " << format_double(rc.grid.min) << "m\n";
    os << "lambda_max = " << format_double(rc.grid.max) << "m\n";
    os << "lambda_points = " << rc.grid.points << "\n";
    os << "lambda_spacing = " << (rc.grid.logarithmic ? "log" : "linear") << "\n";
    os << "output = " << rc.output_path << "\n";
    os << "rel_tol = " << format_double(rc.rel_tol) << "\n";
    os << "seed = " << rc.seed << "\n";
    if (rc.threads) os << "threads = " << *rc.threads << "\n";
    os << "photons_per_shot = " << format_double(rc.readout.photons_per_shot) << "\n";
    os << "contrast = " << format_double(rc.readout.contrast) << "\n";
    os << "baseline = " << format_double(rc.readout.baseline) << "\n";
    os << "shots = " << rc.readout.shots << "\n";
    os << "phi_mw_points = " << rc.phi_mw_points << "\n";
    return os.str();
}

}  // namespace spinforce
