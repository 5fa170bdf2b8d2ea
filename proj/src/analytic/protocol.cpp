#include "pulsefringe/analytic/protocol.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"

#include <cmath>
#include <sstream>

namespace pf {

void ProtocolParams::validate() const
{
    require(omega0 > 0, "omega0 must be positive");
    require(nbar >= 0, "nbar must be non-negative");
    require(tau0 >= 0 && tau1 >= 0 && tau2 >= 0 && tau3 >= 0 && tau4 >= 0, "durations must be non-negative");
    require(phi2 > 0 && phi2 < pi / 4, "phi2 must lie in (0, pi/4)");
    require(omega_p > 0, "omega_p must be positive");
    require(omega4 >= 0, "omega4 must be non-negative");
    require(sigma5 >= 0, "sigma5 must be non-negative");
}

std::vector<std::string> ProtocolParams::warnings() const
{
    std::vector<std::string> w;
    auto fmt = [](const char* what, double v) {
        std::ostringstream s;
        s << what << " = " << v;
        return s.str();
    };
    if (omega0 * tau1 < 10)
        w.push_back(fmt("omega0*tau1 not >> 1", omega0 * tau1));
    if (omega4 > 0 && omega4 * tau3 < 10)
        w.push_back(fmt("omega4*tau3 not >> 1", omega4 * tau3));
    if (omega4 > 0 && tau4 > 0 && omega4 * tau4 < 2)
        w.push_back(fmt("omega4*tau4 < 2, large-expansion forms inaccurate", omega4 * tau4));
    if (phi2 > pi / 8)
        w.push_back(fmt("phi2 above pi/8", phi2));
    return w;
}

double omega_p_for_omega2(double omega2, double phi2)
{
    require(phi2 >= 0 && phi2 < pi / 4, "phi2 must lie in [0, pi/4)");
    return omega2 / std::sqrt(std::cos(2.0 * phi2));
}

CubicPulse make_pulse(double omega_p, double phi2, double wavelength)
{
    require(phi2 >= 0 && phi2 < pi / 4, "phi2 must lie in [0, pi/4)");
    require(wavelength > 0, "wavelength must be positive");
    CubicPulse p;
    p.k = 2.0 * pi / wavelength;
    p.omega2_sq = std::cos(2.0 * phi2) * omega_p * omega_p;
    p.inv_l = p.k / 3.0 * std::tan(2.0 * phi2);
    return p;
}

FringePattern FringePattern::make(double delta_x, double sigma_c, double sigma_lambda)
{
    require(delta_x > 0 && sigma_c > 0 && sigma_lambda >= 0, "invalid fringe pattern scales");
    FringePattern f;
    f.delta_x = delta_x;
    f.sigma_c = sigma_c;
    f.sigma_lambda = sigma_lambda;
    f.p_c = sigma_c / delta_x;
    f.p_lambda = sigma_lambda / delta_x;
    return f;
}

double sigma_x_after_free_fall(const GaussianState& state, double mass, double tau1, double lambda1)
{
    require(tau1 >= 0, "tau1 must be non-negative");
    return std::sqrt(free_evolve(state, mass, tau1, lambda1).var_x);
}

double transfer_focus_rate(double tau3, double omega4, double tau4)
{
    double wt = omega4 * tau4;
    double den = wt < 1e-8 ? tau3 + tau4 : tau3 + std::tanh(wt) / omega4;
    require(den > 0, "mapping condition: zero denominator");
    return 1.0 / den;
}

double position_map_coefficient(double mass, double tau3, double omega4, double tau4)
{
    double wt = omega4 * tau4;
    if (wt < 1e-8)
        return (tau3 + tau4) / mass;
    return (tau3 * std::cosh(wt) + std::sinh(wt) / omega4) / mass;
}

MappingCondition mapping_condition_omega2sq_tau2(double tau1, double tau3, double omega4, double tau4,
                                                 const GaussianState& state_after_step1, double mass)
{
    require(tau1 > 0 && tau3 > 0, "mapping condition needs tau1, tau3 > 0");
    require(mass > 0, "mass must be positive");
    MappingCondition m;
    double chirp = state_after_step1.cov_xp() / (mass * state_after_step1.var_x);
    m.exact = chirp + transfer_focus_rate(tau3, omega4, tau4);
    m.limit = 1.0 / tau1 + 1.0 / tau3;
    return m;
}

double cubic_strength(double mass, const CubicPulse& pulse, double tau2)
{
    if (!(pulse.inv_l > 0))
        throw NoFringes("no cubic term");
    return std::cbrt(3.0 * mass * pulse.omega2_sq * tau2 * pulse.inv_l / hbar);
}

double fringe_ratio(double sigma_x1, double mass, const CubicPulse& pulse, double tau2)
{
    return 2.0 * sigma_x1 * cubic_strength(mass, pulse, tau2);
}

double sigma_c_with_inversion(double sigma_x1, double mass, double tau3, double omega4, double tau4)
{
    require(omega4 > 0, "sigma_c_with_inversion needs omega4 > 0");
    return hbar * (omega4 * tau3 + 1.0) * std::exp(omega4 * tau4) / (4.0 * sigma_x1 * mass * omega4);
}

FringePattern pattern_from_map(double sigma_x1, double mass, const CubicPulse& pulse, double tau2,
                               double map_b, double sigma_lambda)
{
    double dx = hbar * map_b * cubic_strength(mass, pulse, tau2);
    double sc = hbar * map_b / (2.0 * sigma_x1);
    return FringePattern::make(dx, sc, sigma_lambda);
}

FringePattern pattern_with_inversion(double sigma_x1, double mass, const CubicPulse& pulse, double tau2,
                                     double tau3, double omega4, double tau4, double sigma_lambda)
{
    double sc = sigma_c_with_inversion(sigma_x1, mass, tau3, omega4, tau4);
    double dx = sc * fringe_ratio(sigma_x1, mass, pulse, tau2);
    return FringePattern::make(dx, sc, sigma_lambda);
}

FringePattern pattern_no_inversion(double sigma_x1, double mass, const CubicPulse& pulse, double tau2,
                                   double tau3, double sigma2, double sigma01)
{
    require(tau3 > 0, "tau3 must be positive");
    double b = tau3 / mass;
    return pattern_from_map(sigma_x1, mass, pulse, tau2, b, std::hypot(sigma2, sigma01) * b);
}

BcResidual b_c_residual(const ProtocolParams& params, const GaussianState& s1, const CubicPulse& pulse,
                        double mass, MappingForm form)
{
    double chirp = s1.cov_xp() / (mass * s1.var_x);
    double focus = form == MappingForm::exact ? transfer_focus_rate(params.tau3, params.omega4, params.tau4)
        : (params.omega4 > 0 ? params.omega4 / (1.0 + params.tau3 * params.omega4) : 1.0 / params.tau3);
    BcResidual r;
    r.b_c = mass / (2.0 * hbar) * (focus + chirp - pulse.omega2_sq * params.tau2);
    r.sigma_bc_over_dx = std::sqrt(std::fabs(r.b_c) / 4.0) / cubic_strength(mass, pulse, params.tau2);
    r.valid = r.sigma_bc_over_dx < 1.0;
    return r;
}

} // namespace pf
