#pragma once

#include "pulsefringe/analytic/protocol.hpp"

namespace pf {

// Seed constants c for x = c dx - sigma_c^4/dx^3.
inline constexpr double seed_max1 = -1.0188;
inline constexpr double seed_max2 = -3.248;
inline constexpr double seed_min1 = -2.338;
inline constexpr double seed_min2 = -4.088;

struct Extrema {
    double x_max1 = 0;
    double x_max2 = 0;
    double x_min1 = 0;
    double x_min2 = 0;
};

// Positions in units of delta_x, refined on the decohered density within
// +-0.3 of the shifted seeds. Throws NoFringes when an extremum sits on the
// edge of its search window.
Extrema extrema_positions_u(double p_c, double p_lambda);
// Same in metres.
Extrema extrema_positions(const FringePattern& f);

struct Moments {
    double mean_x = 0;
    double x2 = 0;     // <x^2>
    double var_x = 0;  // <x^2> - <x>^2
    double mean_p = 0;
    double p2 = 0;     // <p^2>
    double var_p = 0;
};

Moments moments_after_step4(const FringePattern& f, double mass, double omega4);

} // namespace pf
