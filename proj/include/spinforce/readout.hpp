#pragma once

// Synthetic photoluminescence readout: Poisson photon counts per shot whose
// mean follows I0 + A_PL cos(phi_mw + phi).

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "spinforce/constants.hpp"
#include "spinforce/error.hpp"

namespace spinforce {

struct ReadoutModel {
    double photons_per_shot = 0.02;
    double contrast = 0.3;
    double baseline = 0.0;  // background counts per shot
    std::int64_t shots = 500000;
    std::uint64_t seed = 1;

    double offset() const { return baseline + photons_per_shot; }        // I0
    double amplitude() const { return contrast * photons_per_shot; }     // A_PL

    bool operator==(const ReadoutModel&) const = default;
};

inline void validate(const ReadoutModel& m) {
    if (!(m.photons_per_shot >= 0.0) || !std::isfinite(m.photons_per_shot))
        throw DomainError("photons_per_shot must be finite and non-negative");
    if (!(m.contrast >= 0.0 && m.contrast <= 1.0)) throw DomainError("contrast must lie in [0, 1]");
    if (!(m.baseline >= 0.0) || !std::isfinite(m.baseline))
        throw DomainError("baseline must be finite and non-negative");
    if (m.shots < 1) throw DomainError("shots must be positive");
}

struct ReadoutPoint {
    double phi_mw = 0.0;      // rad
    double mean_counts = 0.0;  // per shot
    double std_error = 0.0;
};

struct SimulatedReadout {
    std::vector<ReadoutPoint> points;
};

// n points equally spaced over [0, 2 pi).
inline std::vector<double> uniform_phase_grid(std::size_t n) {
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    return grid;
}

// Draws model.shots Poisson samples per grid point. The generator is owned by
// the call and seeded from model.seed, so the output is a pure function of the
// arguments.
inline SimulatedReadout simulate_readout(double phi_true, std::span<const double> phi_mw_grid,
                                         const ReadoutModel& model) {
    validate(model);
    if (phi_mw_grid.empty()) throw DomainError("phase grid must not be empty");
    for (std::size_t i = 1; i < phi_mw_grid.size(); ++i)
        if (!(phi_mw_grid[i] > phi_mw_grid[i - 1])) throw DomainError("phase grid must be strictly increasing");

    std::mt19937_64 rng(model.seed);
    SimulatedReadout out;
    out.points.reserve(phi_mw_grid.size());
    const auto n = static_cast<double>(model.shots);
    for (double phi_mw : phi_mw_grid) {
        const double mean = model.offset() + model.amplitude() * std::cos(phi_mw + phi_true);
        double sum = 0.0;
        double sum_sq = 0.0;
        if (mean > 0.0) {
            std::poisson_distribution<std::int64_t> counts(mean);
            for (std::int64_t s = 0; s < model.shots; ++s) {
                const auto k = static_cast<double>(counts(rng));
                sum += k;
                sum_sq += k * k;
            }
        }
        const double avg = sum / n;
        double se;
        if (model.shots > 1) {
            const double var = std::max(0.0, (sum_sq - n * avg * avg) / (n - 1.0));
            // all-equal samples carry at least one count of resolution
            se = var > 0.0 ? std::sqrt(var / n) : 1.0 / n;
        } else {
            se = std::sqrt(std::max(avg, 1.0));
        }
        out.points.push_back({phi_mw, avg, se});
    }
    return out;
}

}  // namespace spinforce
