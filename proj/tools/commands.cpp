#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include "spinforce/csv.hpp"
#include "spinforce/geometry.hpp"
#include "spinforce/inference.hpp"
#include "spinforce/limits.hpp"
#include "spinforce/sensor.hpp"

namespace spinforce::cli {

namespace {

std::string sci(double v, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

std::string fixed(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

RunConfig resolve_config(const GlobalOptions& opts) {
    RunConfig rc = default_run_config(opts.scenario);
    if (opts.config_path) rc = load_run_config(*opts.config_path, rc);
    if (opts.out) rc.output_path = *opts.out;
    if (opts.seed) rc.seed = rc.readout.seed = *opts.seed;
    if (opts.rel_tol) rc.rel_tol = *opts.rel_tol;
    if (opts.threads) rc.threads = *opts.threads;
    validate(rc);
    return rc;
}

int cmd_curve(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const auto grid = make_grid(rc.grid);
    const unsigned threads = rc.threads.value_or(std::max(1u, std::thread::hardware_concurrency()));
    const ExclusionCurve curve = exclusion_curve(grid, rc.experiment, rc.rel_tol, threads);

    std::ofstream file(rc.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: cannot write '" << rc.output_path << "'\n";
        return kExitUsage;
    }
    write_curve_csv(file, curve);
    file.close();

    for (const auto& gap : curve.gaps)
        err << "warning: lambda = " << sci(gap.lambda) << " m omitted: " << gap.reason << '\n';

    out << "scenario: " << rc.experiment.label << " (" << to_string(rc.experiment.seq)
        << ", sup(phi) = " << sci(rc.experiment.phase_bound, 4) << " rad)\n";
    out << "wrote " << curve.points.size() << " points to " << rc.output_path << '\n';
    if (!curve.points.empty()) {
        const CurvePoint* nearest = &curve.points.front();
        for (const auto& p : curve.points)
            if (std::abs(std::log(p.lambda / 20e-6)) < std::abs(std::log(nearest->lambda / 20e-6))) nearest = &p;
        out << "bound nearest 20 um: lambda = " << sci(nearest->lambda) << " m, m_a = " << sci(nearest->alp_mass)
            << " eV, g_s^N g_p^e < " << sci(nearest->g_bound) << '\n';
    }
    return kExitOk;
}

VerifyReport run_verify(const VerifyOptions& opts) {
    check_rel_tol(opts.rel_tol);
    const auto lambdas = log_grid(0.1 * units::um, 1.0 * units::mm, opts.lambda_points);
    const auto distances = log_grid(0.05 * units::um, 10.0 * units::um, opts.distance_points);
    const auto radii = linear_grid(100.0 * units::um, 500.0 * units::um, opts.radius_points);

    VerifyReport rep;
    rep.threshold = std::max(1e-6, opts.rel_tol);
    rep.max_rel_deviation = -1.0;
    for (double lambda : lambdas)
        for (double d : distances)
            for (double radius : radii) {
                const double closed = opts.closed_form ? opts.closed_form(lambda, radius, d)
                                                       : shape_factor_closed_form(lambda, radius, d).value;
                const double quad = shape_factor_quadrature(lambda, radius, d, opts.rel_tol).value;
                const double scale = std::max(std::abs(closed), std::abs(quad));
                const double dev = scale > 0.0 ? std::abs(closed - quad) / scale : 0.0;
                ++rep.points;
                if (dev > rep.max_rel_deviation) {
                    rep.max_rel_deviation = dev;
                    rep.worst_lambda = lambda;
                    rep.worst_radius = radius;
                    rep.worst_distance = d;
                }
            }
    return rep;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
    const VerifyReport rep = run_verify(opts);
    out << "closed form vs quadrature over " << rep.points << " (lambda, R, d) points\n";
    out << "max relative deviation: " << sci(rep.max_rel_deviation, 3) << " (threshold " << sci(rep.threshold, 1)
        << ")\n";
    out << "worst case: lambda = " << sci(rep.worst_lambda, 3) << " m, R = " << sci(rep.worst_radius, 3)
        << " m, d = " << sci(rep.worst_distance, 3) << " m\n";
    if (!rep.passed()) {
        err << "verification FAILED at lambda = " << sci(rep.worst_lambda, 3) << " m, R = " << sci(rep.worst_radius, 3)
            << " m, d = " << sci(rep.worst_distance, 3) << " m\n";
        return kExitFailed;
    }
    out << "verification passed\n";
    return kExitOk;
}

int cmd_simulate(const RunConfig& rc, const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.phi_true && opts.coupling) {
        err << "error: give either --phi or --coupling, not both\n";
        return kExitUsage;
    }
    double phi = opts.phi_true.value_or(0.0);
    if (opts.coupling) {
        const auto& ex = rc.experiment;
        phi = accumulated_phase(opts.lambda, Coupling{*opts.coupling}, ex.source, ex.vib, ex.seq, rc.rel_tol);
    }
    ReadoutModel model = rc.readout;
    model.seed = rc.seed;
    const auto grid = uniform_phase_grid(static_cast<std::size_t>(rc.phi_mw_points));
    const SimulatedReadout data = simulate_readout(phi, grid, model);

    std::ofstream file(opts.out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: cannot write '" << opts.out_path << "'\n";
        return kExitUsage;
    }
    write_readout_csv(file, data);
    out << "phi_true = " << sci(phi, 9) << " rad; " << data.points.size() << " points, " << model.shots
        << " shots each, seed " << model.seed << " -> " << opts.out_path << '\n';
    return kExitOk;
}

int cmd_fit(const std::vector<std::string>& files, double k_sigma, std::ostream& out, std::ostream& err) {
    if (files.empty() || files.size() > 2) {
        err << "error: fit takes one data file and an optional benchmark file\n";
        return kExitUsage;
    }
    std::vector<PhaseMeasurement> phases;
    for (const auto& path : files) {
        std::ifstream in(path);
        if (!in) {
            err << "error: cannot read '" << path << "'\n";
            return kExitUsage;
        }
        FitResult fit;
        try {
            fit = fit_cosine(read_readout_csv(in, path));
        } catch (const CsvError& e) {
            err << "error: " << e.what() << '\n';
            return kExitUsage;
        } catch (const FitError& e) {
            err << "error: " << path << ": " << e.what() << '\n';
            return kExitUsage;
        }
        out << path << ": I0 = " << sci(fit.offset) << ", A_PL = " << sci(fit.amplitude) << " +/- "
            << sci(fit.amplitude_std, 2) << ", phi = " << fixed(fit.phi) << " +/- " << fixed(fit.phi_std)
            << " rad, residual rms = " << sci(fit.residual_rms, 3)
            << (fit.weighted ? " (weighted)" : " (unweighted)") << '\n';
        if (fit.low_contrast) err << "warning: " << path << ": contrast consistent with zero, phase undetermined\n";
        phases.push_back(to_measurement(fit, path));
    }
    if (phases.size() == 2) {
        const PhaseMeasurement diff = difference_phase(phases[0], phases[1]);
        out << "difference: phi = " << fixed(diff.phi) << " +/- " << fixed(diff.phi_std) << " rad\n";
        out << "phase bound (" << k_sigma << " sigma): sup(phi) = " << fixed(phase_upper_bound(diff, k_sigma))
            << " rad\n";
        if (diff.phi != 0.0)
            err << "note: non-zero phase difference; bound taken as |phi| + " << k_sigma << " sigma\n";
    }
    return kExitOk;
}

}  // namespace spinforce::cli
