#pragma once

// Phase extraction from readout curves I(phi_mw) = I0 + A_PL cos(phi_mw + phi).
//
// The model is linear in (I0, a, b) once written as
//     I = I0 + a cos(phi_mw) + b sin(phi_mw),   a = A_PL cos(phi), b = -A_PL sin(phi),
// so the fit is an ordinary (weighted) least-squares solve and the phase
// uncertainty follows from the parameter covariance through atan2.

#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinforce/constants.hpp"
#include "spinforce/error.hpp"
#include "spinforce/readout.hpp"

namespace spinforce {

// Wraps an angle into (-pi, pi].
inline double wrap_phase(double x) {
    double y = std::remainder(x, 2.0 * kPi);  // [-pi, pi]
    if (y <= -kPi) y += 2.0 * kPi;
    return y;
}

struct FitResult {
    double offset = 0.0;      // I0
    double amplitude = 0.0;   // A_PL >= 0
    double phi = 0.0;         // wrapped to (-pi, pi]
    double phi_std = 0.0;
    double amplitude_std = 0.0;
    double residual_rms = 0.0;
    bool weighted = false;     // per-point standard errors were used
    bool low_contrast = false; // amplitude within two standard deviations of zero
};

struct PhaseMeasurement {
    double phi = 0.0;
    double phi_std = 0.0;
    std::string label;
};

// Least-squares cosine fit. Points are weighted by 1/std_error^2 when every
// point carries a positive standard error; otherwise equally, with the
// covariance scaled by the residual variance.
inline FitResult fit_cosine(std::span<const ReadoutPoint> data) {
    const auto n = static_cast<Eigen::Index>(data.size());
    if (n < 3) throw FitError("cosine fit needs at least three points");

    bool weighted = true;
    for (const auto& p : data)
        if (!(p.std_error > 0.0) || !std::isfinite(p.std_error)) weighted = false;

    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = data[static_cast<std::size_t>(i)];
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(p.phi_mw);
        design(i, 2) = std::sin(p.phi_mw);
        y(i) = p.mean_counts;
        w(i) = weighted ? 1.0 / p.std_error : 1.0;
    }

    const Eigen::MatrixXd wa = w.asDiagonal() * design;
    const Eigen::VectorXd wy = w.asDiagonal() * y;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wa);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw FitError("cosine fit design is rank deficient (need three distinct phases)");
    const Eigen::Vector3d coef = qr.solve(wy);

    const Eigen::VectorXd resid = y - design * coef;
    const Eigen::VectorXd wresid = wy - wa * coef;
    Eigen::Matrix3d cov = (wa.transpose() * wa).inverse();
    if (!weighted) {
        const double dof = static_cast<double>(n - 3);
        cov *= dof > 0 ? wresid.squaredNorm() / dof : 0.0;
    }

    FitResult r;
    r.weighted = weighted;
    r.offset = coef(0);
    const double a = coef(1);
    const double b = coef(2);
    const double amp2 = a * a + b * b;
    r.amplitude = std::sqrt(amp2);
    r.phi = wrap_phase(std::atan2(-b, a));
    r.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));

    if (amp2 > 0.0) {
        // phi = atan2(-b, a): d phi/da = b / A^2, d phi/db = -a / A^2
        const Eigen::Vector2d jphi(b / amp2, -a / amp2);
        const Eigen::Vector2d jamp(a / r.amplitude, b / r.amplitude);
        const Eigen::Matrix2d cab = cov.bottomRightCorner<2, 2>();
        r.phi_std = std::sqrt(std::max(0.0, jphi.dot(cab * jphi)));
        r.amplitude_std = std::sqrt(std::max(0.0, jamp.dot(cab * jamp)));
    } else {
        r.phi_std = std::numeric_limits<double>::infinity();
        r.amplitude_std = std::sqrt(std::max(0.0, 0.5 * (cov(1, 1) + cov(2, 2))));
    }
    r.low_contrast = r.amplitude <= 2.0 * r.amplitude_std;
    return r;
}

inline FitResult fit_cosine(const SimulatedReadout& readout) { return fit_cosine(readout.points); }

inline PhaseMeasurement to_measurement(const FitResult& fit, std::string label = {}) {
    return {fit.phi, fit.phi_std, std::move(label)};
}

// phi = phi_2 - phi_1 with independent uncertainties added in quadrature.
inline PhaseMeasurement difference_phase(const PhaseMeasurement& with_mass,
                                         const PhaseMeasurement& without_mass) {
    return {wrap_phase(with_mass.phi - without_mass.phi), std::hypot(with_mass.phi_std, without_mass.phi_std),
            with_mass.label.empty() ? std::string("difference") : with_mass.label + " - " + without_mass.label};
}

// Upper bound on |phi|: k_sigma * phi_std for a null result, |phi| + k_sigma *
// phi_std otherwise.
inline double phase_upper_bound(const PhaseMeasurement& m, double k_sigma = 2.0) {
    if (!(k_sigma > 0.0)) throw DomainError("k_sigma must be positive");
    return std::abs(m.phi) + k_sigma * m.phi_std;
}

}  // namespace spinforce
