#pragma once

// Vibrating source mass and the phase it imprints on the sensor spin under
// pulse sequences synchronized to the vibration.
//
// Time origin: t = 0 at the far turning point (d = d0 + 2A). The pi/2 and pi
// pulses sit on the equilibrium crossings t = tau/2 + n tau, tau = pi/omega_m,
// so the first free evolution covers the half period closest to the mass.

#include <cmath>
#include <string>

#include "spinforce/constants.hpp"
#include "spinforce/error.hpp"
#include "spinforce/geometry.hpp"
#include "spinforce/physics.hpp"
#include "spinforce/quadrature.hpp"

namespace spinforce {

struct VibrationProfile {
    double d0 = 0.5 * units::um;                 // closest approach
    double d0_uncertainty = 0.1 * units::um;
    double amplitude = 41.1 * units::nm;
    double amplitude_uncertainty = 0.1 * units::nm;
    double omega_m = 1.18e6;                     // rad/s

    double half_period() const { return kPi / omega_m; }

    bool operator==(const VibrationProfile&) const = default;
};

inline void validate(const VibrationProfile& v) {
    if (!(v.d0 > 0.0)) throw DomainError("d0 must be positive");
    if (!(v.d0_uncertainty >= 0.0) || !(v.d0_uncertainty < v.d0))
        throw DomainError("d0 uncertainty must lie in [0, d0)");
    if (!(v.amplitude >= 0.0)) throw DomainError("vibration amplitude must be non-negative");
    if (!(v.amplitude_uncertainty >= 0.0) || !(v.amplitude_uncertainty <= v.amplitude))
        throw DomainError("amplitude uncertainty must lie in [0, A]");
    if (!(v.omega_m > 0.0) || !std::isfinite(v.omega_m)) throw DomainError("omega_m must be positive");
}

enum class SequenceKind { Ramsey, SpinEcho, Cpmg };

// Angle between the effective field and the NV axis in the experiment.
inline const double kDefaultTheta = std::acos(1.0 / std::sqrt(3.0));

struct PulseSequence {
    SequenceKind kind = SequenceKind::SpinEcho;
    int cpmg_pulses = 1;  // K, only meaningful for Cpmg
    double theta = kDefaultTheta;
    double theta_uncertainty = 0.0;

    static PulseSequence spin_echo(double theta = kDefaultTheta) {
        return {SequenceKind::SpinEcho, 1, theta, 0.0};
    }
    static PulseSequence cpmg(int pulses, double theta = kDefaultTheta) {
        return {SequenceKind::Cpmg, pulses, theta, 0.0};
    }

    bool operator==(const PulseSequence&) const = default;
};

inline void validate(const PulseSequence& s) {
    if (s.kind == SequenceKind::Cpmg && s.cpmg_pulses < 1)
        throw DomainError("CPMG needs at least one pi pulse");
    if (!(s.theta >= 0.0 && s.theta <= kPi / 2)) throw DomainError("theta must lie in [0, pi/2]");
    if (!(s.theta_uncertainty >= 0.0)) throw DomainError("theta uncertainty must be non-negative");
}

inline std::string to_string(const PulseSequence& s) {
    switch (s.kind) {
        case SequenceKind::Ramsey: return "ramsey";
        case SequenceKind::SpinEcho: return "echo";
        case SequenceKind::Cpmg: return "cpmg-" + std::to_string(s.cpmg_pulses);
    }
    return "unknown";
}

// Lens-to-spin distance d(t) = d0 + A [1 + cos(omega_m t)].
inline double distance_at(double t, const VibrationProfile& v) {
    return v.d0 + v.amplitude * (1.0 + std::cos(v.omega_m * t));
}

// Bracket [int_{tau/2}^{3tau/2} q(d(t)) dt - int_{3tau/2}^{5tau/2} q(d(t)) dt]
// for any distance-dependent quantity q. Both half periods are walked with
// the same local time s in [0, tau], so identical distances produce an
// identically zero integrand (static mass gives exactly zero).
template <class Q>
QuadratureResult echo_bracket(Q&& q, const VibrationProfile& v, double rel_tol,
                              double time_shift = 0.0) {
    const double tau = v.half_period();
    auto integrand = [&](double s) {
        const double near = distance_at(time_shift + 0.5 * tau + s, v);
        const double far = distance_at(time_shift + 1.5 * tau + s, v);
        return q(near) - q(far);
    };
    const double mid[] = {0.5 * tau};
    return integrate(integrand, 0.0, tau, rel_tol, mid);
}

// Spin-echo phase phi = gamma cos(theta) [int B dt - int B dt] with the field of
// the lens evaluated at d(t). time_shift delays the field modulation relative to
// the pulses (0 = synchronized as in the experiment).
inline double phase_spin_echo(double lambda, Coupling g, const SourceMass& source,
                              const VibrationProfile& vib, const PulseSequence& seq, double rel_tol,
                              double time_shift = 0.0, const PhysicalConstants& c = kConstants) {
    if (seq.kind != SequenceKind::SpinEcho) throw DomainError("phase_spin_echo needs a spin-echo sequence");
    check_rel_tol(rel_tol);
    if (g.value == 0.0) return 0.0;
    auto field = [&](double d) { return effective_field_mass(lambda, source, d, g, c); };
    const double bracket = echo_bracket(field, vib, rel_tol, time_shift).value;
    return c.gyromagnetic_ratio * std::cos(seq.theta) * bracket;
}

// CPMG-K synchronized so that each pi pulse falls on an equilibrium crossing.
// The one-period bracket is scaled by K/2 relative to the echo, which makes
// CPMG-2 coincide with the spin echo.
inline double phase_cpmg(double lambda, Coupling g, const SourceMass& source,
                         const VibrationProfile& vib, const PulseSequence& seq, double rel_tol,
                         const PhysicalConstants& c = kConstants) {
    if (seq.kind != SequenceKind::Cpmg || seq.cpmg_pulses < 1)
        throw DomainError("phase_cpmg needs a CPMG sequence with K >= 1");
    check_rel_tol(rel_tol);
    if (g.value == 0.0) return 0.0;
    auto field = [&](double d) { return effective_field_mass(lambda, source, d, g, c); };
    const double bracket = echo_bracket(field, vib, rel_tol).value;
    return 0.5 * seq.cpmg_pulses * c.gyromagnetic_ratio * std::cos(seq.theta) * bracket;
}

// Ramsey phase for a static mass at distance d during a free evolution
// tau_free. Illustrative only: the limits pipeline never uses it.
inline double phase_ramsey(double lambda, Coupling g, const SourceMass& source, double d,
                           double theta, double tau_free, const PhysicalConstants& c = kConstants) {
    return c.gyromagnetic_ratio * effective_field_mass(lambda, source, d, g, c) * std::cos(theta) *
           tau_free;
}

inline double accumulated_phase(double lambda, Coupling g, const SourceMass& source,
                                const VibrationProfile& vib, const PulseSequence& seq,
                                double rel_tol) {
    switch (seq.kind) {
        case SequenceKind::SpinEcho: return phase_spin_echo(lambda, g, source, vib, seq, rel_tol);
        case SequenceKind::Cpmg: return phase_cpmg(lambda, g, source, vib, seq, rel_tol);
        case SequenceKind::Ramsey: break;
    }
    throw DomainError("Ramsey sequences do not accumulate a synchronized phase");
}

// Probability of |m_S = 0> after the final pi/2 pulse of phase phi_mw.
inline double population_ground(double phi, double phi_mw) {
    return 0.5 + 0.5 * std::cos(phi_mw + phi);
}

}  // namespace spinforce
