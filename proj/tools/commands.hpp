#pragma once

// Subcommands of the spinforce tool. Each returns the process exit code:
// 0 success, 1 verification failure, 2 usage or configuration error.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "spinforce/config.hpp"

namespace spinforce::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

struct GlobalOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<double> rel_tol;
    std::optional<unsigned> threads;
    Scenario scenario = Scenario::Current;
};

// Defaults for the scenario, then the config file, then explicit flags.
// Throws ConfigError with every violation.
RunConfig resolve_config(const GlobalOptions& opts);

int cmd_curve(const RunConfig& rc, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    double rel_tol = 1e-9;
    int lambda_points = 5;
    int distance_points = 5;
    int radius_points = 3;
    // Replaces the closed form under test; lets the harness be checked
    // against a deliberately wrong implementation.
    std::function<double(double lambda, double radius, double d)> closed_form;
};

struct VerifyReport {
    double max_rel_deviation = 0.0;
    double threshold = 0.0;
    double worst_lambda = 0.0;
    double worst_radius = 0.0;
    double worst_distance = 0.0;
    int points = 0;
    bool passed() const { return max_rel_deviation <= threshold; }
};

VerifyReport run_verify(const VerifyOptions& opts);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

struct SimulateOptions {
    std::optional<double> phi_true;  // rad
    std::optional<double> coupling;  // g_s^N g_p^e; phase from the configured experiment
    double lambda = 20e-6;           // force range used with `coupling`
    std::string out_path = "readout.csv";
};

int cmd_simulate(const RunConfig& rc, const SimulateOptions& opts, std::ostream& out, std::ostream& err);

// files[0] is the scan with the mass, optional files[1] the benchmark scan
// without it.
int cmd_fit(const std::vector<std::string>& files, double k_sigma, std::ostream& out, std::ostream& err);

}  // namespace spinforce::cli
