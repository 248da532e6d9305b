#pragma once

// Adaptive 1-D quadrature engine shared by the geometry oracle and the time
// integrals of the echo sequences. Backed by GSL's QAG (21-point
// Gauss-Kronrod with global bisection) applied between known breakpoints.

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <span>
#include <sstream>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "spinforce/error.hpp"

namespace spinforce {

inline constexpr double kMinRelTol = 1e-10;
inline constexpr double kMaxRelTol = 1e-3;
// Floor for tolerances the library requests of itself (inner integrals of
// nested quadrature); user-facing tolerances are limited to kMinRelTol.
inline constexpr double kEngineMinRelTol = 1e-13;

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
};

inline void check_rel_tol(double rel_tol, double lowest = kMinRelTol) {
    if (!(rel_tol >= lowest && rel_tol <= kMaxRelTol)) {
        std::ostringstream os;
        os << "relative tolerance " << rel_tol << " outside [" << lowest << ", " << kMaxRelTol << "]";
        throw DomainError(os.str());
    }
}

namespace detail {

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

inline constexpr std::size_t kWorkspaceIntervals = 2000;

// GSL reports failures through a process-wide handler that aborts by
// default; switch it off once so status codes come back to the caller.
inline void disable_gsl_abort() {
    static const bool done = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)done;
}

template <class F>
struct Trampoline {
    F* f;
    std::exception_ptr failure;

    static double call(double x, void* self) {
        auto* t = static_cast<Trampoline*>(self);
        if (t->failure) return 0.0;
        try {
            return (*t->f)(x);
        } catch (...) {
            t->failure = std::current_exception();
            return 0.0;
        }
    }
};

}  // namespace detail

// Integrates f over [a, b] to relative accuracy rel_tol. Breakpoints outside
// (a, b) are ignored. Throws ConvergenceError carrying the best estimate when
// the tolerance cannot be met.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol,
                           std::span<const double> breakpoints = {}) {
    check_rel_tol(rel_tol, kEngineMinRelTol);
    if (!(b >= a)) throw DomainError("integration bounds out of order");
    if (a == b) return {};
    detail::disable_gsl_abort();

    std::vector<double> nodes{a};
    for (double x : breakpoints)
        if (x > a && x < b) nodes.push_back(x);
    std::sort(nodes.begin() + 1, nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    nodes.push_back(b);

    using Fn = std::remove_reference_t<F>;
    detail::Trampoline<Fn> tramp{&f, nullptr};
    gsl_function gf{&detail::Trampoline<Fn>::call, &tramp};
    const std::size_t pieces = nodes.size() - 1;

    // Coarse pass fixes the absolute error budget shared by all pieces, so a
    // piece holding a negligible share of the integral is not refined to its
    // own relative tolerance.
    double coarse = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
        double v = 0.0, e = 0.0, abs_v = 0.0, asc = 0.0;
        gsl_integration_qk21(&gf, nodes[i], nodes[i + 1], &v, &e, &abs_v, &asc);
        coarse += std::abs(v);
    }
    if (tramp.failure) std::rethrow_exception(tramp.failure);
    const double budget = rel_tol * coarse / static_cast<double>(pieces);

    std::unique_ptr<gsl_integration_workspace, detail::WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(detail::kWorkspaceIntervals));
    QuadratureResult out;
    int worst_status = GSL_SUCCESS;
    for (std::size_t i = 0; i < pieces; ++i) {
        double v = 0.0, e = 0.0;
        const int status = gsl_integration_qag(&gf, nodes[i], nodes[i + 1], budget, rel_tol,
                                               detail::kWorkspaceIntervals, GSL_INTEG_GAUSS21,
                                               ws.get(), &v, &e);
        if (tramp.failure) std::rethrow_exception(tramp.failure);
        if (status != GSL_SUCCESS) worst_status = status;
        out.value += v;
        out.error += e;
    }
    // An identically vanishing integrand is a legitimate exact result.
    if (out.value == 0.0 && out.error == 0.0) return out;
    if (!std::isfinite(out.value) || out.error > rel_tol * std::abs(out.value)) {
        std::ostringstream os;
        os << "quadrature did not converge on [" << a << ", " << b << "]";
        if (worst_status != GSL_SUCCESS) os << " (" << gsl_strerror(worst_status) << ")";
        os << ": estimate " << out.value << ", error " << out.error
           << ", requested relative tolerance " << rel_tol;
        throw ConvergenceError(os.str(), out.value, out.error);
    }
    return out;
}

// Breakpoints a + scale * 4^k for k = 0, 1, ... inside (a, b). Used to hand the
// adaptive rule an exponentially peaked integrand in pieces it resolves well.
inline std::vector<double> geometric_breakpoints(double a, double b, double scale) {
    std::vector<double> pts;
    if (!(scale > 0.0)) return pts;
    for (double step = scale; a + step < b; step *= 4.0) pts.push_back(a + step);
    return pts;
}

}  // namespace spinforce
