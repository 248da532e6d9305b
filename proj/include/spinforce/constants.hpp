#pragma once

// Physical constants and unit helpers. Everything inside the library is SI;
// electron-volts only appear where an ALP mass crosses the API.

#include <numbers>

namespace spinforce {

struct PhysicalConstants {
    double hbar;                // J s
    double electron_mass;       // kg
    double gyromagnetic_ratio;  // rad s^-1 T^-1, electron, stored as magnitude
    double speed_of_light;      // m s^-1
    double ev_to_joule;         // J / eV
};

// CODATA 2014.
inline constexpr PhysicalConstants kConstants{
    .hbar = 1.054571800e-34,
    .electron_mass = 9.10938356e-31,
    .gyromagnetic_ratio = 1.760859644e11,
    .speed_of_light = 299792458.0,
    .ev_to_joule = 1.6021766208e-19,
};

static_assert(kConstants.hbar > 0 && kConstants.electron_mass > 0 &&
              kConstants.gyromagnetic_ratio > 0 && kConstants.speed_of_light > 0 &&
              kConstants.ev_to_joule > 0);

inline constexpr double kPi = std::numbers::pi;

namespace units {
inline constexpr double m = 1.0;
inline constexpr double mm = 1e-3;
inline constexpr double um = 1e-6;
inline constexpr double nm = 1e-9;
}  // namespace units

}  // namespace spinforce
