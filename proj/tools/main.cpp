// spinforce: exclusion limits on the electron-nucleon monopole-dipole
// coupling from a single-spin echo measurement.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace spinforce;
using namespace spinforce::cli;

int main(int argc, char** argv) {
    CLI::App app{"Exclusion limits on g_s^N g_p^e from a spin-echo quantum sensor"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    GlobalOptions opts;
    std::string config_path, out_path, scenario = "current";
    std::uint64_t seed = 0;
    double rel_tol = 0.0;
    unsigned threads = 0;
    bool dump_config = false;
    auto* o_config = app.add_option("--config", config_path, "key = value configuration file");
    auto* o_out = app.add_option("--out", out_path, "output file");
    auto* o_seed = app.add_option("--seed", seed, "random seed");
    auto* o_tol = app.add_option("--rel-tol", rel_tol, "relative quadrature tolerance");
    auto* o_threads = app.add_option("--threads", threads, "worker threads for lambda sweeps");
    app.add_option("--scenario", scenario, "experiment defaults")
        ->check(CLI::IsMember({"current", "projected"}));
    app.add_flag("--dump-config", dump_config, "print the resolved configuration and exit");

    auto* curve = app.add_subcommand("curve", "compute an exclusion curve and write it as CSV");

    auto* verify = app.add_subcommand("verify", "check the closed-form shape factor against quadrature");
    VerifyOptions vopts;
    verify->add_option("--lambda-points", vopts.lambda_points, "lambda samples over [0.1 um, 1 mm]");
    verify->add_option("--distance-points", vopts.distance_points, "d samples over [0.05 um, 10 um]");
    verify->add_option("--radius-points", vopts.radius_points, "R samples over [100 um, 500 um]");

    auto* simulate = app.add_subcommand("simulate", "generate a synthetic readout scan");
    SimulateOptions sopts;
    double phi = 0.0, coupling = 0.0, lambda = sopts.lambda;
    auto* o_phi = simulate->add_option("--phi", phi, "accumulated phase to simulate (rad)");
    auto* o_coupling = simulate->add_option("--coupling", coupling, "coupling g_s^N g_p^e; phase from the config");
    simulate->add_option("--lambda", lambda, "force range in metres used with --coupling");
    o_phi->excludes(o_coupling);

    auto* fit = app.add_subcommand("fit", "fit readout scans and difference them");
    std::vector<std::string> fit_files;
    double k_sigma = 2.0;
    fit->add_option("files", fit_files, "data file with mass, then optional benchmark file without mass")
        ->required()
        ->expected(1, 2);
    fit->add_option("--k-sigma", k_sigma, "multiple of sigma used for the phase bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*o_config) opts.config_path = config_path;
    if (*o_out) opts.out = out_path;
    if (*o_seed) opts.seed = seed;
    if (*o_tol) opts.rel_tol = rel_tol;
    if (*o_threads) opts.threads = threads;
    opts.scenario = scenario == "projected" ? Scenario::Projected : Scenario::Current;

    try {
        if (*fit && !dump_config) return cmd_fit(fit_files, k_sigma, std::cout, std::cerr);

        const RunConfig rc = resolve_config(opts);
        if (dump_config) {
            std::cout << dump_run_config(rc);
            return kExitOk;
        }
        if (*curve) return cmd_curve(rc, std::cout, std::cerr);
        if (*verify) {
            vopts.rel_tol = rc.rel_tol;
            return cmd_verify(vopts, std::cout, std::cerr);
        }
        if (*simulate) {
            if (*o_phi) sopts.phi_true = phi;
            if (*o_coupling) sopts.coupling = coupling;
            sopts.lambda = lambda;
            if (opts.out) sopts.out_path = *opts.out;
            return cmd_simulate(rc, sopts, std::cout, std::cerr);
        }
        std::cerr << app.help();
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
}
