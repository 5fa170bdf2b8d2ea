#include "pulsefringe/metrics/coherence.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <limits>

namespace pf {

double coherence_length(const GaussianState& s)
{
    s.validate();
    if (s.purity >= 1.0)
        return std::numeric_limits<double>::infinity();
    const double P = s.purity;
    return 2.0 * P * std::sqrt(s.var_x) / std::sqrt((1.0 - P) * (1.0 + P));
}

double certified_lower_bound(double sigma_x1, double sigma_c, double sigma_lambda)
{
    require(sigma_x1 > 0 && sigma_c > 0, "certified_lower_bound: widths must be positive");
    require(sigma_lambda >= 0, "certified_lower_bound: sigma_lambda must be non-negative");
    if (sigma_lambda == 0)
        return std::numeric_limits<double>::infinity();
    return 2.0 * sigma_x1 * sigma_c / sigma_lambda;
}

PostPulseState post_pulse_state(const GaussianState& step1, double mass, const CubicPulse& pulse, double tau2,
                                double lambda2)
{
    step1.validate();
    require(mass > 0 && tau2 >= 0 && lambda2 >= 0, "post_pulse_state: invalid arguments");
    PostPulseState s;
    s.step1 = step1;
    s.mass = mass;
    s.u2 = pulse.u2(mass);
    s.u3 = pulse.u3(mass);
    s.tau2 = tau2;
    s.lambda2 = lambda2;
    return s;
}

namespace {

using cplx = std::complex<double>;

struct Integrand {
    double vx, c, D, m, t, u2t, u3t, X, xi;

    cplx operator()(double xp) const
    {
        const cplx alpha(1.0 / (2.0 * vx), 3.0 * u3t * xp / hbar);
        const double beta = (xp * (c / vx - 2.0 * u2t + m / t) - m * xi / t) / hbar;
        const cplx expo = -beta * beta / (4.0 * alpha)
                          + cplx(-D * xp * xp / (2.0 * hbar * hbar),
                                 m * X * (xi - xp) / (hbar * t) - u3t * xp * xp * xp / (4.0 * hbar));
        return std::exp(expo) / std::sqrt(alpha);
    }
};

cplx composite(const Integrand& f, double a, double b, int panels)
{
    using GL = boost::math::quadrature::gauss<double, 20>;
    const double h = (b - a) / panels;
    double re = 0, im = 0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        re += GL::integrate([&](double x) { return f(x).real(); }, lo, lo + h);
        im += GL::integrate([&](double x) { return f(x).imag(); }, lo, lo + h);
    }
    return {re, im};
}

} // namespace

static cplx flight_integral(const PostPulseState& s, double tau3, double X, double xi, double abs_tol)
{
    require(tau3 > 0, "density_after_flight: tau3 must be positive");
    const double vx = s.step1.var_x, vp = s.step1.var_p, c = s.step1.cov_xp();
    Integrand f{vx, c, vp - c * c / vx + 2.0 * hbar * hbar * s.lambda2 * s.tau2, s.mass, tau3,
                s.u2 * s.tau2, s.u3 * s.tau2, X, xi};
    require(f.D > 0, "density_after_flight: non-positive momentum spread");
    const double window = 8.0 * hbar / std::sqrt(f.D);

    int panels = 16;
    cplx prev = composite(f, -window, window, panels);
    for (;;) {
        panels *= 2;
        cplx next = composite(f, -window, window, panels);
        double residual = std::abs(next - prev);
        if (residual <= abs_tol)
            return next;
        if (panels >= (1 << 16))
            throw QuadratureError("g1 quadrature did not converge", residual);
        prev = next;
    }
}

static double flight_prefactor(const PostPulseState& s, double tau3)
{
    return s.mass / (2.0 * pi * hbar * tau3) / std::sqrt(2.0 * pi * s.step1.var_x) * std::sqrt(pi);
}

static double diagonal(const PostPulseState& s, double tau3, double x)
{
    const cplx rough = flight_integral(s, tau3, x, 0.0, std::numeric_limits<double>::infinity());
    return flight_integral(s, tau3, x, 0.0, 1e-10 * std::abs(rough)).real();
}

std::complex<double> density_after_flight(const PostPulseState& s, double tau3, double X, double xi)
{
    const double pre = flight_prefactor(s, tau3);
    const double d = diagonal(s, tau3, X);
    if (xi == 0)
        return pre * d;
    return pre * flight_integral(s, tau3, X, xi, 1e-8 * d);
}

double g1_numeric(double x1, double x2, const PostPulseState& s, double tau3)
{
    const double d1 = diagonal(s, tau3, x1), d2 = diagonal(s, tau3, x2);
    if (!(d1 > 0 && d2 > 0))
        throw QuadratureError("g1: vanishing diagonal density", 0.0);
    const double norm = std::sqrt(d1 * d2);
    if (x1 == x2)
        return 1.0;
    const cplx off = flight_integral(s, tau3, 0.5 * (x1 + x2), x1 - x2, 1e-8 * norm);
    return std::min(1.0, std::abs(off) / norm);
}

} // namespace pf
