#pragma once

// Effective field of a half-ball source mass on the electron spin.
//
// The lens is a half-ball of radius R, curved face towards the spin, flat face
// away from it. The spin sits on the symmetry axis at distance d below the
// lowest point of the lens. Integrating the single-nucleon field over the lens
// volume leaves only the axial component,
//
//     B = (hbar g rho / (2 m gamma)) * f(lambda, R, d),
//
// where the shape factor f has dimension of length. f is available in closed
// form and as a nested adaptive quadrature of the cylindrical volume integral;
// the latter exists to certify the former.

#include <cmath>
#include <algorithm>
#include <string>
#include <vector>

#include "spinforce/constants.hpp"
#include "spinforce/error.hpp"
#include "spinforce/physics.hpp"
#include "spinforce/quadrature.hpp"

namespace spinforce {

struct SourceMass {
    double radius = 250.0 * units::um;
    double radius_uncertainty = 2.5 * units::um;
    double nucleon_density = 1.33e30;  // m^-3
    std::string label = "fused silica half-ball lens";

    bool operator==(const SourceMass&) const = default;
};

inline void validate(const SourceMass& s) {
    if (!(s.radius > 0.0)) throw DomainError("source radius must be positive");
    if (!(s.radius_uncertainty >= 0.0) || !(s.radius_uncertainty < s.radius))
        throw DomainError("source radius uncertainty must lie in [0, R)");
    if (!(s.nucleon_density > 0.0)) throw DomainError("nucleon density must be positive");
}

struct ShapeFactorResult {
    double value = 0.0;            // m
    double estimated_error = 0.0;  // m, zero for the closed form
};

namespace detail {

inline void check_shape_args(double lambda, double radius, double d) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("radius must be positive");
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("distance must be non-negative");
}

}  // namespace detail

// Closed-form shape factor. exp(-d/lambda) is factored out of every term and
// the differences of exponentials go through expm1, so the result stays
// accurate for lambda << d (where it underflows cleanly to 0) and for
// lambda >> R.
inline ShapeFactorResult shape_factor_closed_form(double lambda, double radius, double d) {
    detail::check_shape_args(lambda, radius, d);
    const double far = d + radius;                                  // distance to the flat face
    const double rim = std::sqrt(radius * radius + far * far);      // distance to the rim
    const double inv_far2 = 1.0 / (far * far);
    const double u = (rim - d) / lambda;
    const double near_decay = std::exp(-d / lambda);
    if (near_decay == 0.0) return {0.0, 0.0};

    const double e_rim = std::exp(-u);
    const double bracket = radius / far                       //
                           - std::exp(-radius / lambda)       //
                           + e_rim * (1.0 + lambda * rim * inv_far2)
                           - lambda * d * inv_far2
                           + lambda * lambda * inv_far2 * std::expm1(-u);
    return {lambda * near_decay * bracket, 0.0};
}

// Axial field integrand per unit volume weight, radial distance l from the
// axis at height z: (1/(lambda r) + 1/r^2) e^{-r/lambda} (z/r) l.
inline double shape_factor_integrand(double lambda, double z, double l) {
    const double r = std::sqrt(z * z + l * l);
    return detail::radial_profile(r, lambda) * (z / r) * l;
}

// Shape factor by nested adaptive quadrature over the lens volume: z from d
// to d + R, l from 0 to sqrt(R^2 - (d + R - z)^2), azimuth done analytically.
inline ShapeFactorResult shape_factor_quadrature(double lambda, double radius, double d,
                                                 double rel_tol) {
    detail::check_shape_args(lambda, radius, d);
    check_rel_tol(rel_tol);
    const double inner_tol = std::max(kEngineMinRelTol, 1e-3 * rel_tol);
    const double far = d + radius;

    auto slice = [&](double z) {
        const double h = far - z;
        const double l_max = std::sqrt(std::max(0.0, radius * radius - h * h));
        if (l_max == 0.0) return 0.0;
        // breakpoints where r - z = lambda 4^k, and at l = z
        std::vector<double> cuts;
        for (double step = lambda; step < 4.0 * l_max; step *= 4.0) {
            const double l = std::sqrt(step * (2.0 * z + step));
            if (l >= l_max) break;
            cuts.push_back(l);
        }
        cuts.push_back(z);
        auto g = [&](double l) { return shape_factor_integrand(lambda, z, l); };
        return integrate(g, 0.0, l_max, inner_tol, cuts).value;
    };

    // The slice integral climbs from 0 over a width of about d^2 / 2R above
    // z = d (the disc radius grows like sqrt(2R(z - d))), and decays on the
    // scale lambda; resolve both.
    auto cuts = geometric_breakpoints(d, far, lambda);
    if (d > 0.0) {
        const auto edge = geometric_breakpoints(d, far, d * d / (2.0 * radius));
        cuts.insert(cuts.end(), edge.begin(), edge.end());
    }
    const QuadratureResult outer = integrate(slice, d, far, rel_tol, cuts);
    return {outer.value, outer.error + inner_tol * std::abs(outer.value)};
}

// Axial effective field (tesla) of the lens at distance d.
inline double effective_field_mass(double lambda, const SourceMass& source, double d, Coupling g,
                                   const PhysicalConstants& c = kConstants) {
    const double f = shape_factor_closed_form(lambda, source.radius, d).value;
    return c.hbar * g.value * source.nucleon_density /
           (2.0 * c.electron_mass * c.gyromagnetic_ratio) * f;
}

}  // namespace spinforce
