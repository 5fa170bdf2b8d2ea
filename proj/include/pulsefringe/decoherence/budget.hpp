#pragma once

#include "pulsefringe/analytic/protocol.hpp"
#include "pulsefringe/core/particle.hpp"

namespace pf {

struct LocalizationRates {
    double lambda1 = 0;
    double lambda2 = 0;
    double lambda3 = 0;
    double lambda4 = 0;
};

// Photon-recoil localization rate along a standing wave at phase phi.
double recoil_rate(double phi, double omega, const Particle& particle, double wavelength);
double step4_recoil(double omega4, const Particle& particle, double wavelength);

// Angular recoil weights along x, y, z; they sum to k^2.
double beta_x(double phi, double k);
double beta_y(double phi, double k);
double beta_z(double phi, double k);

// Recoil during the pulse and the inverted potential plus a common
// black-body rate in every step.
LocalizationRates protocol_rates(const ProtocolParams& params, const Particle& particle, double wavelength,
                                 double lambda_bb);

double purity_after_free_fall(double nbar, double lambda1, double tau1, double sigma_x1);

struct BlurringBudget {
    double sigma01 = 0; // kg m/s
    double sigma2 = 0;  // kg m/s
    double sigma3 = 0;  // m
    double sigma4 = 0;  // m
    double sigma5 = 0;  // m
    double sigma_lambda = 0;
    // Composition factors: momentum-to-position map (omega4 tau3 + 1)/(m omega4)
    // and the expansion factor e^{2 omega4 tau4}/4.
    double momentum_map = 0;
    double expansion = 0;

    double recompose() const;
};

BlurringBudget blurring_budget(const ProtocolParams& params, const Particle& particle,
                               const LocalizationRates& rates, double sigma_x1, double nbar);

// Coherent-splitting variant (no inverted potential): sigma_lambda = sqrt(s2^2+s01^2) tau3/m.
BlurringBudget blurring_budget_no_inversion(const ProtocolParams& params, const Particle& particle,
                                            const LocalizationRates& rates, double sigma_x1, double nbar);

} // namespace pf
