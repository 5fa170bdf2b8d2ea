#pragma once

#include "pulsefringe/analytic/extrema.hpp"
#include "pulsefringe/analytic/protocol.hpp"

#include <vector>

namespace pf {

struct PatternMetrics {
    double visibility = 0;
    double p_r = 0;
    double quality = 0;    // visibility^2 p_r
    double n_runs = 0;     // ceil((pi^2/4) m^2 / q); +inf when q = 0
    bool fringes = false;
};

// ceil((pi^2/4) m^2 / q)
double run_count(double quality, double m_sigma);

// From a density sampled on a uniform grid.
PatternMetrics pattern_metrics(const std::vector<double>& x, const std::vector<double>& pdf,
                               const Extrema& extrema, double m_sigma = 5.0);

// From the closed-form decohered density; p_r by Gauss-Legendre quadrature.
PatternMetrics pattern_metrics(const FringePattern& f, const Extrema& extrema, double m_sigma = 5.0);

// Extrema plus metrics for a dimensionless shape; a washed-out pattern
// gives visibility 0 instead of an error.
PatternMetrics shape_metrics(double p_c, double p_lambda, double m_sigma = 5.0, Extrema* extrema_out = nullptr);

// Probability between two positions of the closed-form decohered density.
double probability_between(const FringePattern& f, double a, double b);

} // namespace pf
