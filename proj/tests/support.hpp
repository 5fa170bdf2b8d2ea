#pragma once

#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/optimizer/pipeline.hpp"

#include <cmath>

namespace pf::test {

inline double rel(double a, double b)
{
    return std::fabs(a - b) / std::fabs(b);
}

// Case study; omega2 = 2 pi 2.5 kHz read as the harmonic stiffness.
inline Scenario case_study()
{
    Scenario s;
    s.particle = particle_from_radius(50e-9);
    auto& p = s.params;
    p.omega0 = 2 * pi * 100e3;
    p.nbar = 0.5;
    p.tau0 = 2e-3;
    p.tau1 = 1.34e-3;
    p.phi2 = 0.05 * pi;
    p.omega_p = omega_p_for_omega2(2 * pi * 2.5e3, p.phi2);
    p.tau2 = 10e-6;
    p.tau3 = 0.66e-3;
    p.omega4 = 2 * pi * 10e3;
    p.tau4 = 0.087e-3;
    return s;
}

// Reference coherent-splitting parameters.
inline Scenario splitting_reference()
{
    Scenario s;
    s.particle = particle_from_radius(50e-9);
    s.geometry = Geometry::splitting;
    auto& p = s.params;
    p.omega0 = 2 * pi * 100e3;
    p.nbar = 0.5;
    p.tau1 = 0.92e-3;
    p.tau3 = 349e-3;
    p.phi2 = 0.9 * pi / 4;
    p.omega_p = omega_p_for_omega2(2 * pi * 1.66e3, p.phi2);
    p.tau2 = 10e-6;
    return s;
}

} // namespace pf::test
