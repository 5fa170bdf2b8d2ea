#pragma once

#include "pulsefringe/analytic/protocol.hpp"
#include "pulsefringe/core/gaussian_state.hpp"

#include <complex>

namespace pf {

// 2 P sigma_x / sqrt(1 - P^2); +inf for a pure state.
double coherence_length(const GaussianState& state);

// 2 sigma_x1 sigma_c / sigma_lambda; +inf when sigma_lambda = 0.
double certified_lower_bound(double sigma_x1, double sigma_c, double sigma_lambda);

struct CoherenceReport {
    double x_c = 0;
    double x_c_star = 0;
    double g1_peaks = 0; // g1 between the two largest peaks, 0 when not computed
};

// State right after a short cubic pulse applied to a centered Gaussian.
struct PostPulseState {
    GaussianState step1;
    double mass = 0;
    double u2 = 0;      // V = u2 x^2 + u3 x^3 during the pulse
    double u3 = 0;
    double tau2 = 0;
    double lambda2 = 0;
};

PostPulseState post_pulse_state(const GaussianState& step1, double mass, const CubicPulse& pulse, double tau2,
                                double lambda2 = 0.0);

// <X + xi/2| rho(tau3) |X - xi/2> after free flight tau3.
std::complex<double> density_after_flight(const PostPulseState& s, double tau3, double X, double xi);

double g1_numeric(double x1, double x2, const PostPulseState& s, double tau3);

} // namespace pf
