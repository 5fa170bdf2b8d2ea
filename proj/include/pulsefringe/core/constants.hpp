#pragma once

#include <numbers>

namespace pf {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018
struct Constants {
    static constexpr double hbar = 1.054571817e-34;   // J s
    static constexpr double k_B = 1.380649e-23;       // J/K
    static constexpr double c = 299792458.0;          // m/s
    static constexpr double epsilon0 = 8.8541878128e-12; // F/m
    static constexpr double amu = 1.66053906660e-27;  // kg
};

inline constexpr double hbar = Constants::hbar;
inline constexpr double k_B = Constants::k_B;

} // namespace pf
