#include "pulsefringe/core/gaussian_state.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"
#include "pulsefringe/core/particle.hpp"

#include <algorithm>
#include <cmath>

namespace pf {

double GaussianState::cov_xp() const
{
    double d = 4.0 * var_x * var_p - hbar * hbar / (purity * purity);
    return cross_sign * 0.5 * std::sqrt(std::max(d, 0.0));
}

double GaussianState::a1() const
{
    return 2.0 * purity * purity * var_p / (hbar * hbar);
}

double GaussianState::a2() const
{
    return 2.0 * purity * purity * var_x / (hbar * hbar);
}

double GaussianState::a3() const
{
    // exponent is -(1/2) v^T S^-1 v, so the xp coefficient carries -cov_xp
    return -4.0 * purity * purity * cov_xp() / (hbar * hbar);
}

void GaussianState::validate() const
{
    require(var_x > 0 && var_p > 0, "Gaussian state variances must be positive");
    require(purity > 0 && purity <= 1.0 + 1e-12, "Gaussian state purity must lie in (0, 1]");
    require(cross_sign >= -1 && cross_sign <= 1, "cross_sign must be -1, 0 or +1");
    double slack = 4.0 * var_x * var_p * purity * purity / (hbar * hbar) - 1.0;
    require(slack > -1e-9, "Gaussian state violates the uncertainty bound");
}

GaussianState GaussianState::from_covariance(double var_x, double var_p, double cov_xp)
{
    double det = var_x * var_p - cov_xp * cov_xp;
    require(var_x > 0 && var_p > 0 && det > 0, "covariance matrix must be positive definite");
    GaussianState s;
    s.var_x = var_x;
    s.var_p = var_p;
    s.purity = std::min(1.0, hbar / (2.0 * std::sqrt(det)));
    s.cross_sign = cov_xp > 0 ? 1 : (cov_xp < 0 ? -1 : 0);
    return s;
}

GaussianState thermal_state(double mass, double omega0, double nbar)
{
    require(nbar >= 0 && std::isfinite(nbar), "thermal_state: nbar must be non-negative");
    double xzp = zero_point_motion(mass, omega0);
    double pzp = std::sqrt(hbar * omega0 * mass / 2.0);
    GaussianState s;
    s.var_x = xzp * xzp * (2.0 * nbar + 1.0);
    s.var_p = pzp * pzp * (2.0 * nbar + 1.0);
    s.purity = 1.0 / (2.0 * nbar + 1.0);
    s.cross_sign = 0;
    return s;
}

GaussianState free_evolve(const GaussianState& s, double mass, double t, double lambda)
{
    require(t >= 0, "free_evolve: negative time");
    double c0 = s.cov_xp();
    double D = 2.0 * hbar * hbar * lambda;
    double vx = s.var_x + 2.0 * c0 * t / mass + s.var_p * t * t / (mass * mass)
        + D * t * t * t / (3.0 * mass * mass);
    double c = c0 + s.var_p * t / mass + D * t * t / (2.0 * mass);
    double vp = s.var_p + D * t;
    if (t == 0)
        return s;
    // purity from the determinant, computed without cancellation
    double det0 = hbar * hbar / (4.0 * s.purity * s.purity);
    double det = det0 + D * t * (s.var_x + c0 * t / mass + s.var_p * t * t / (3.0 * mass * mass))
        + D * D * t * t * t * t / (12.0 * mass * mass);
    GaussianState out;
    out.var_x = vx;
    out.var_p = vp;
    out.purity = std::min(1.0, hbar / (2.0 * std::sqrt(det)));
    out.cross_sign = c > 0 ? 1 : (c < 0 ? -1 : 0);
    return out;
}

} // namespace pf
