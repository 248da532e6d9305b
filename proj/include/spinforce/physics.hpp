#pragma once

// Monopole-dipole interaction between an electron spin and a single nucleon,
// its effective-field form, and the force-range / ALP-mass conversion.

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "spinforce/constants.hpp"
#include "spinforce/error.hpp"

namespace spinforce {

using Vec3 = Eigen::Vector3d;

// Dimensionless product g_s^N g_p^e.
struct Coupling {
    double value = 0.0;
};

// Compton wavelength of the mediator, metres.
class ForceRange {
public:
    explicit ForceRange(double lambda) : lambda_(lambda) {
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw DomainError("force range must be positive and finite, got " + std::to_string(lambda));
    }
    double metres() const noexcept { return lambda_; }

private:
    double lambda_;
};

// Vector from the electron to the nucleon.
class Displacement {
public:
    explicit Displacement(const Vec3& r) : r_(r), norm_(r.norm()) {
        if (!(norm_ > 0.0) || !std::isfinite(norm_))
            throw DomainError("displacement must be non-zero and finite");
    }
    const Vec3& vector() const noexcept { return r_; }
    double norm() const noexcept { return norm_; }
    Vec3 unit() const { return r_ / norm_; }

private:
    Vec3 r_;
    double norm_;
};

namespace detail {

// (1/(lambda r) + 1/r^2) exp(-r/lambda), shared radial profile of the
// potential and the field.
inline double radial_profile(double r, double lambda) {
    return (1.0 / (lambda * r) + 1.0 / (r * r)) * std::exp(-r / lambda);
}

inline Vec3 require_unit(const Vec3& v) {
    if (std::abs(v.norm() - 1.0) > 1e-12) throw DomainError("spin direction must be a unit vector");
    return v;
}

}  // namespace detail

// Monopole-dipole potential energy in joules.
inline double potential_monopole_dipole(const Displacement& r, ForceRange lambda, Coupling g,
                                        const Vec3& sigma_hat,
                                        const PhysicalConstants& c = kConstants) {
    const Vec3 s = detail::require_unit(sigma_hat);
    const double prefactor = c.hbar * c.hbar * g.value / (8.0 * kPi * c.electron_mass);
    return prefactor * detail::radial_profile(r.norm(), lambda.metres()) * s.dot(r.unit());
}

// Effective magnetic field (tesla) equivalent to the potential of one nucleon.
inline Vec3 effective_field_point(const Displacement& r, ForceRange lambda, Coupling g,
                                  const PhysicalConstants& c = kConstants) {
    const double prefactor =
        c.hbar * g.value / (4.0 * kPi * c.electron_mass * c.gyromagnetic_ratio);
    return prefactor * detail::radial_profile(r.norm(), lambda.metres()) * r.unit();
}

// Zeeman energy (|gamma| hbar / 2) sigma_hat . B. With the electron's negative
// gyromagnetic ratio this is -gamma hbar/2 sigma.B and reproduces the
// monopole-dipole potential.
inline double zeeman_energy(const Vec3& sigma_hat, const Vec3& field,
                            const PhysicalConstants& c = kConstants) {
    return 0.5 * c.gyromagnetic_ratio * c.hbar * detail::require_unit(sigma_hat).dot(field);
}

// ALP mass in eV for a given force range.
inline double lambda_to_alp_mass(ForceRange lambda, const PhysicalConstants& c = kConstants) {
    return c.hbar * c.speed_of_light / lambda.metres() / c.ev_to_joule;
}

inline ForceRange alp_mass_to_lambda(double mass_ev, const PhysicalConstants& c = kConstants) {
    if (!(mass_ev > 0.0) || !std::isfinite(mass_ev))
        throw DomainError("ALP mass must be positive and finite");
    return ForceRange(c.hbar * c.speed_of_light / (mass_ev * c.ev_to_joule));
}

}  // namespace spinforce
