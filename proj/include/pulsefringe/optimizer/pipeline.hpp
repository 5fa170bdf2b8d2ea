#pragma once

#include "pulsefringe/analytic/extrema.hpp"
#include "pulsefringe/analytic/protocol.hpp"
#include "pulsefringe/core/particle.hpp"
#include "pulsefringe/decoherence/budget.hpp"
#include "pulsefringe/metrics/coherence.hpp"
#include "pulsefringe/metrics/metrics.hpp"

#include <string>
#include <vector>

namespace pf {

enum class Geometry {
    inverted,  // steps 0-4 with the inverted potential
    splitting, // no step 4, pattern read out after tau3
};

struct Scenario {
    Particle particle;
    double wavelength = 1550e-9;
    ProtocolParams params;
    Geometry geometry = Geometry::inverted;
    double lambda_bb = 0;   // black-body localization rate in every step
    double m_sigma = 5.0;
    bool compute_metrics = true; // extrema and pattern metrics
    bool compute_g1 = false;
};

struct Evaluation {
    GaussianState state0;
    GaussianState state1;
    double x_zp = 0;
    double sigma_x1 = 0;
    CubicPulse pulse;
    LocalizationRates rates;
    BlurringBudget budget;
    FringePattern pattern;
    BcResidual bc;
    bool fringes = false;
    Extrema extrema;
    PatternMetrics metrics;
    CoherenceReport coherence;
    double peak_distance = 0;   // x_max2 - x_max1 magnitude
    std::vector<std::string> warnings;
};

Evaluation evaluate_protocol(const Scenario& s);

// omega_p that satisfies the mapping condition for the given tau2.
double omega_p_from_mapping(const Scenario& s, MappingForm form = MappingForm::exact);

// tau4 giving 1.75 delta_x = target; 0 if the pattern is already that wide.
double tau4_for_fringe_spacing(const Scenario& s, double target);

// Factor between delta_x and the first-minima spacing used for fringe targets.
inline constexpr double minima_spacing_factor = 1.75;
// Factor between delta_x and the spacing of the two largest peaks.
inline constexpr double peak_distance_factor = 2.23;

} // namespace pf
