#include "pulsefringe/decoherence/budget.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"

#include <cmath>

namespace pf {

double recoil_rate(double phi, double omega, const Particle& particle, double wavelength)
{
    require(omega >= 0, "recoil_rate: omega must be non-negative");
    double v = particle.volume;
    return pi * pi * omega * omega * particle.material.density * v * v * particle.re_pol_factor
        * (7.0 - 3.0 * std::cos(2.0 * phi)) / (5.0 * hbar * wavelength * wavelength * wavelength);
}

double step4_recoil(double omega4, const Particle& particle, double wavelength)
{
    require(omega4 > 0, "step4_recoil: omega4 must be positive");
    return recoil_rate(pi / 2, omega4, particle, wavelength);
}

double beta_x(double phi, double k)
{
    return k * k * (7.0 - 3.0 * std::cos(2.0 * phi)) / 10.0;
}

double beta_y(double phi, double k)
{
    double c = std::cos(phi);
    return k * k * c * c / 5.0;
}

double beta_z(double phi, double k)
{
    double c = std::cos(phi);
    return 2.0 * k * k * c * c / 5.0;
}

LocalizationRates protocol_rates(const ProtocolParams& p, const Particle& particle, double wavelength,
                                 double lambda_bb)
{
    LocalizationRates r;
    r.lambda1 = lambda_bb;
    r.lambda2 = recoil_rate(p.phi2, p.omega_p, particle, wavelength) + lambda_bb;
    r.lambda3 = lambda_bb;
    r.lambda4 = (p.omega4 > 0 ? step4_recoil(p.omega4, particle, wavelength) : 0.0) + lambda_bb;
    return r;
}

double purity_after_free_fall(double nbar, double lambda1, double tau1, double sigma_x1)
{
    double a = 2.0 * nbar + 1.0;
    return 1.0 / std::sqrt(8.0 / 3.0 * lambda1 * tau1 * sigma_x1 * sigma_x1 + a * a);
}

double BlurringBudget::recompose() const
{
    double mom = sigma2 * sigma2 + sigma01 * sigma01;
    double inner = mom * momentum_map * momentum_map + sigma3 * sigma3 + sigma4 * sigma4;
    return std::sqrt(inner * expansion + sigma5 * sigma5);
}

namespace {

double sigma01_of(double nbar, double lambda1, double tau1, double sigma_x1)
{
    // (hbar^2/4)(1-P^2)/(P^2 sigma_x^2) with 1/P^2 expanded to avoid cancellation
    double a = 2.0 * nbar + 1.0;
    double inv_p2_minus_1 = 8.0 / 3.0 * lambda1 * tau1 * sigma_x1 * sigma_x1 + (a * a - 1.0);
    return hbar / 2.0 * std::sqrt(inv_p2_minus_1) / sigma_x1;
}

} // namespace

BlurringBudget blurring_budget(const ProtocolParams& p, const Particle& particle, const LocalizationRates& r,
                               double sigma_x1, double nbar)
{
    require(p.omega4 > 0, "blurring_budget: inverted potential needs omega4 > 0");
    double m = particle.mass;
    BlurringBudget b;
    b.sigma01 = sigma01_of(nbar, r.lambda1, p.tau1, sigma_x1);
    b.sigma2 = std::sqrt(2.0 * hbar * hbar * r.lambda2 * p.tau2);
    b.sigma3 = std::sqrt(2.0 * hbar * hbar * r.lambda3 * p.tau3 * p.tau3 * p.tau3 / (3.0 * m * m));
    b.sigma4 = std::sqrt(hbar * hbar * r.lambda4 / (m * m * p.omega4 * p.omega4 * p.omega4));
    b.sigma5 = p.sigma5;
    b.momentum_map = (p.omega4 * p.tau3 + 1.0) / (m * p.omega4);
    b.expansion = std::exp(2.0 * p.omega4 * p.tau4) / 4.0;
    b.sigma_lambda = b.recompose();
    return b;
}

BlurringBudget blurring_budget_no_inversion(const ProtocolParams& p, const Particle& particle,
                                            const LocalizationRates& r, double sigma_x1, double nbar)
{
    double m = particle.mass;
    BlurringBudget b;
    b.sigma01 = sigma01_of(nbar, r.lambda1, p.tau1, sigma_x1);
    b.sigma2 = std::sqrt(2.0 * hbar * hbar * r.lambda2 * p.tau2);
    b.sigma3 = std::sqrt(2.0 * hbar * hbar * r.lambda3 * p.tau3 * p.tau3 * p.tau3 / (3.0 * m * m));
    b.sigma5 = p.sigma5;
    b.momentum_map = p.tau3 / m;
    b.expansion = 1.0;
    b.sigma_lambda = b.recompose();
    return b;
}

} // namespace pf
