#pragma once

// Exclusion limits on g_s^N g_p^e.
//
// The accumulated phase is linear in the coupling, phi = g * h(lambda; R, d0,
// A, theta), so a bound sup(phi) on the phase becomes
//
//     sup(g) = sup(phi) / min h,
//
// with the minimum taken over the box of experimental parameter
// uncertainties.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spinforce/constants.hpp"
#include "spinforce/error.hpp"
#include "spinforce/geometry.hpp"
#include "spinforce/physics.hpp"
#include "spinforce/quadrature.hpp"
#include "spinforce/sensor.hpp"

namespace spinforce {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval around(double centre, double half_width) { return {centre - half_width, centre + half_width}; }
    double at(double fraction) const { return lo + fraction * (hi - lo); }
    double width() const { return hi - lo; }

    bool operator==(const Interval&) const = default;
};

struct NuisanceBox {
    Interval radius;
    Interval d0;
    Interval amplitude;
    Interval theta;

    bool operator==(const NuisanceBox&) const = default;
};

inline void validate(const NuisanceBox& b) {
    auto ordered = [](const Interval& i) { return i.lo <= i.hi && std::isfinite(i.lo) && std::isfinite(i.hi); };
    if (!ordered(b.radius) || !(b.radius.lo > 0.0)) throw DomainError("radius range must be ordered and positive");
    if (!ordered(b.d0) || !(b.d0.lo > 0.0)) throw DomainError("d0 range must be ordered and positive");
    if (!ordered(b.amplitude) || !(b.amplitude.lo >= 0.0))
        throw DomainError("amplitude range must be ordered and non-negative");
    if (!ordered(b.theta) || !(b.theta.lo >= 0.0) || !(b.theta.hi <= kPi / 2))
        throw DomainError("theta range must be ordered within [0, pi/2]");
}

// Box spanned by the quoted one-sigma uncertainties, theta clamped to [0, pi/2].
inline NuisanceBox nuisance_box(const SourceMass& source, const VibrationProfile& vib,
                                const PulseSequence& seq) {
    Interval theta = Interval::around(seq.theta, seq.theta_uncertainty);
    theta.lo = std::max(0.0, theta.lo);
    theta.hi = std::min(kPi / 2, theta.hi);
    return {Interval::around(source.radius, source.radius_uncertainty),
            Interval::around(vib.d0, vib.d0_uncertainty),
            Interval::around(vib.amplitude, vib.amplitude_uncertainty), theta};
}

struct ExperimentConfig {
    SourceMass source;
    VibrationProfile vib;
    PulseSequence seq;
    double phase_bound = 0.036;  // sup(phi), rad
    NuisanceBox nuisance = nuisance_box(source, vib, seq);
    std::string label = "current";

    bool operator==(const ExperimentConfig&) const = default;
};

inline void validate(const ExperimentConfig& c) {
    validate(c.source);
    validate(c.vib);
    validate(c.seq);
    validate(c.nuisance);
    if (c.seq.kind == SequenceKind::Ramsey) throw DomainError("limits need an echo or CPMG sequence");
    if (!(c.phase_bound >= 0.0) || !std::isfinite(c.phase_bound))
        throw DomainError("phase bound must be finite and non-negative");
}

// Point in the nuisance space.
struct SensorParams {
    double radius = 0.0;
    double d0 = 0.0;
    double amplitude = 0.0;
    double theta = 0.0;
};

// Phase per unit coupling (rad). The time integral runs over the vibration
// phase x = omega_m t in [pi/2, 3pi/2]; the second half period is the same
// x shifted by pi, where cos flips sign.
inline double sensitivity_h(double lambda, const SensorParams& p, double rho, const PulseSequence& seq,
                            double omega_m, double rel_tol, const PhysicalConstants& c = kConstants) {
    check_rel_tol(rel_tol);
    if (!(omega_m > 0.0)) throw DomainError("omega_m must be positive");
    if (!(p.amplitude >= 0.0)) throw DomainError("amplitude must be non-negative");
    if (!(p.d0 > 0.0)) throw DomainError("d0 must be positive");

    double prefactor = 0.0;
    switch (seq.kind) {
        case SequenceKind::SpinEcho: prefactor = c.hbar * rho * std::cos(p.theta) / (2.0 * c.electron_mass); break;
        case SequenceKind::Cpmg:
            if (seq.cpmg_pulses < 1) throw DomainError("CPMG needs K >= 1");
            prefactor = c.hbar * seq.cpmg_pulses * rho * std::cos(p.theta) / (4.0 * c.electron_mass);
            break;
        case SequenceKind::Ramsey: throw DomainError("sensitivity is defined for echo and CPMG sequences");
    }

    auto difference = [&](double x) {
        const double swing = p.amplitude * std::cos(x);
        const double near = p.d0 + (p.amplitude + swing);
        const double far = p.d0 + (p.amplitude - swing);
        return shape_factor_closed_form(lambda, p.radius, near).value -
               shape_factor_closed_form(lambda, p.radius, far).value;
    };
    const double turning[] = {kPi};
    const double bracket = integrate(difference, 0.5 * kPi, 1.5 * kPi, rel_tol, turning).value / omega_m;
    return prefactor * bracket;
}

struct BoxMinimum {
    double h = std::numeric_limits<double>::infinity();
    SensorParams at;
    int evaluations = 0;
};

// Minimum of h over the nuisance box: all 16 corners, then a 5^4 grid to catch
// non-monotone behaviour. Degenerate axes are sampled once.
inline BoxMinimum minimize_h(double lambda, const NuisanceBox& box, double rho, const PulseSequence& seq,
                             double omega_m, double rel_tol) {
    validate(box);
    BoxMinimum best;
    auto consider = [&](const SensorParams& p) {
        const double h = sensitivity_h(lambda, p, rho, seq, omega_m, rel_tol);
        ++best.evaluations;
        if (h < best.h) {
            best.h = h;
            best.at = p;
        }
    };
    auto levels = [](const Interval& i, int n) {
        std::vector<double> out;
        if (i.width() == 0.0) return std::vector<double>{i.lo};
        for (int k = 0; k < n; ++k) out.push_back(i.at(static_cast<double>(k) / (n - 1)));
        return out;
    };

    for (int pass = 0; pass < 2; ++pass) {
        const int n = pass == 0 ? 2 : 5;
        const auto rs = levels(box.radius, n), ds = levels(box.d0, n), as = levels(box.amplitude, n),
                   ts = levels(box.theta, n);
        const bool grid_adds_points = rs.size() > 1 || ds.size() > 1 || as.size() > 1 || ts.size() > 1;
        if (pass == 1 && !grid_adds_points) break;
        for (double r : rs)
            for (double d : ds)
                for (double a : as)
                    for (double t : ts) {
                        // corners were done in the first pass
                        if (pass == 1 && (r == rs.front() || r == rs.back()) && (d == ds.front() || d == ds.back()) &&
                            (a == as.front() || a == as.back()) && (t == ts.front() || t == ts.back()))
                            continue;
                        consider({r, d, a, t});
                    }
    }
    return best;
}

struct BoundResult {
    double lambda = 0.0;
    double h_min = 0.0;
    SensorParams worst_case;
    double g_bound = std::numeric_limits<double>::infinity();

    bool constrained() const { return std::isfinite(g_bound) && g_bound > 0.0; }
};

// sup(g) = sup(phi) / min h. An unconstrained point (h_min not positive, or
// the ratio overflowing) reports an infinite bound.
inline BoundResult bound_at_lambda(double lambda, const ExperimentConfig& config, double rel_tol) {
    if (!(config.phase_bound > 0.0)) throw DomainError("phase bound must be positive");
    const BoxMinimum m =
        minimize_h(lambda, config.nuisance, config.source.nucleon_density, config.seq, config.vib.omega_m, rel_tol);
    BoundResult r;
    r.lambda = lambda;
    r.h_min = m.h;
    r.worst_case = m.at;
    if (m.h > 0.0 && std::isfinite(m.h)) {
        const double g = config.phase_bound / m.h;
        if (std::isfinite(g)) r.g_bound = g;
    }
    return r;
}

struct CurvePoint {
    double lambda = 0.0;     // m
    double alp_mass = 0.0;   // eV
    double g_bound = 0.0;
};

struct CurveGap {
    double lambda = 0.0;
    std::string reason;
};

struct ExclusionCurve {
    std::vector<CurvePoint> points;
    std::vector<CurveGap> gaps;
};

inline constexpr double kMinGridLambda = 10.0 * units::nm;
inline constexpr double kMaxGridLambda = 0.1;

inline std::vector<double> log_grid(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw DomainError("invalid logarithmic grid");
    if (n == 1) return {lo};
    std::vector<double> g(static_cast<std::size_t>(n));
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    g.back() = hi;
    return g;
}

inline std::vector<double> linear_grid(double lo, double hi, int n) {
    if (n < 1 || !(hi >= lo)) throw DomainError("invalid linear grid");
    if (n == 1) return {lo};
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    g.back() = hi;
    return g;
}

inline std::vector<double> default_lambda_grid() { return log_grid(0.05 * units::um, 50.0 * units::um, 60); }

// Bound at every grid point. Points are evaluated on up to `threads` workers
// and assembled in grid order; a failing or unconstrained point becomes a gap.
inline ExclusionCurve exclusion_curve(const std::vector<double>& lambda_grid, const ExperimentConfig& config,
                                      double rel_tol, unsigned threads = 1) {
    validate(config);
    check_rel_tol(rel_tol);
    if (lambda_grid.empty()) throw DomainError("lambda grid must not be empty");
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        const double l = lambda_grid[i];
        if (!(l >= kMinGridLambda && l <= kMaxGridLambda)) throw DomainError("lambda grid must lie in [10 nm, 10 cm]");
        if (i > 0 && !(l > lambda_grid[i - 1])) throw DomainError("lambda grid must be strictly increasing");
    }

    struct Slot {
        std::optional<BoundResult> result;
        std::string failure;
    };
    std::vector<Slot> slots(lambda_grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < slots.size(); i = next++) {
            try {
                slots[i].result = bound_at_lambda(lambda_grid[i], config, rel_tol);
            } catch (const std::exception& e) {
                slots[i].failure = e.what();
            }
        }
    };
    const unsigned n_workers = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(slots.size()));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    }

    ExclusionCurve curve;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const double l = lambda_grid[i];
        if (slots[i].result && slots[i].result->constrained()) {
            curve.points.push_back({l, lambda_to_alp_mass(ForceRange(l)), slots[i].result->g_bound});
        } else {
            curve.gaps.push_back({l, slots[i].result ? "no constraint at this lambda (min h not positive)"
                                                     : slots[i].failure});
        }
    }
    return curve;
}

// Central values of the published measurement; sup(phi) = 2 * 0.018 rad.
inline ExperimentConfig current_experiment() {
    ExperimentConfig c;
    c.nuisance = nuisance_box(c.source, c.vib, c.seq);
    return c;
}

inline constexpr double kPhotoluminescenceGain = 17.0;

// Improved configuration: CPMG-1024 locked to a 2.51e6 rad/s vibration, a BGO
// source, d0 = 100 nm, A = 400 nm and 17x the photoluminescence rate. The
// parameters are targets, so the nuisance box collapses to the centre.
// scan_factor multiplies the number of scans (phase bound shrinks by its
// square root).
inline ExperimentConfig projected_scenario(double scan_factor = 1.0) {
    if (!(scan_factor >= 1.0)) throw DomainError("scan factor must be at least 1");
    ExperimentConfig c;
    c.label = "projected";
    c.source.nucleon_density = 4.29e30;
    c.source.radius_uncertainty = 0.0;
    c.source.label = "BGO half-ball lens";
    c.vib.d0 = 100.0 * units::nm;
    c.vib.d0_uncertainty = 0.0;
    c.vib.amplitude = 400.0 * units::nm;
    c.vib.amplitude_uncertainty = 0.0;
    c.vib.omega_m = 2.51e6;
    c.seq = PulseSequence::cpmg(1024);
    c.phase_bound = 0.036 / std::sqrt(kPhotoluminescenceGain * scan_factor);
    c.nuisance = nuisance_box(c.source, c.vib, c.seq);
    return c;
}

}  // namespace spinforce
