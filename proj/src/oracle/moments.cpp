#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"
#include "pulsefringe/numerics/parallel.hpp"
#include "pulsefringe/analytic/pdf.hpp"
#include "pulsefringe/oracle/oracle.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>

namespace pf {

GaussianState covariance_evolution(const GaussianState& s, double mass, double lambda, Potential potential,
                                   double omega, double t, const CovarianceOptions& opt)
{
    namespace ode = boost::numeric::odeint;
    s.validate();
    require(mass > 0 && t >= 0 && lambda >= 0, "covariance_evolution: invalid arguments");
    if (t == 0)
        return s;
    double kappa = 0;
    if (potential == Potential::harmonic)
        kappa = mass * omega * omega;
    else if (potential == Potential::inverted)
        kappa = -mass * omega * omega;

    // variables scaled by the initial variances
    const double sx = s.var_x, sp = s.var_p, sc = std::sqrt(sx * sp);
    using State = std::array<double, 3>;
    State y{1.0, s.cov_xp() / sc, 1.0};
    auto rhs = [&](const State& v, State& d, double) {
        d[0] = 2.0 * v[1] * sc / (mass * sx);
        d[1] = (v[2] * sp / mass - kappa * v[0] * sx) / sc;
        d[2] = (-2.0 * kappa * v[1] * sc + 2.0 * hbar * hbar * lambda) / sp;
    };
    if (opt.fixed_steps > 0) {
        ode::runge_kutta4<State> stepper;
        ode::integrate_n_steps(stepper, rhs, y, 0.0, t / opt.fixed_steps, opt.fixed_steps);
    } else {
        auto stepper = ode::make_controlled(1e-14, opt.rtol, ode::runge_kutta_dopri5<State>());
        ode::integrate_adaptive(stepper, rhs, y, 0.0, t, t * 1e-3);
    }
    return GaussianState::from_covariance(y[0] * sx, y[2] * sp, y[1] * sc);
}

namespace {

// characteristic function of u = x / delta_x
std::complex<double> characteristic(double kappa, double p, double pl)
{
    using namespace std::complex_literals;
    const double p2 = p * p;
    std::complex<double> pre = std::sqrt(2.0 * p2 / (2.0 * p2 + 1i * kappa));
    return pre * std::exp(-0.5 * (p2 + pl * pl) * kappa * kappa - 1i * kappa * kappa * kappa / 12.0);
}

// Trapezoid rule on the whole kappa line (conjugate symmetry folds it onto
// kappa >= 0). Its error is the density aliased by multiples of 2 pi / h, so h
// follows from the support of the density; truncation from the Gaussian factor.
struct ThetaNodes {
    double h = 0;
    std::vector<std::complex<double>> phi;
};

ThetaNodes theta_nodes(double p, double pl, double u_max, double refine)
{
    const double width = std::sqrt(p * p + pl * pl);
    const double left_tail = 40.0 / (2.0 * p * p);
    const double span = 2.0 * (u_max + std::min(left_tail, 1e7) + 14.0 * width + 20.0);
    ThetaNodes n;
    n.h = 2.0 * pi / span / refine;
    const double k_max = 9.0 * std::sqrt(refine) / width;
    const auto count = static_cast<std::size_t>(std::ceil(k_max / n.h)) + 1;
    if (count > (std::size_t(1) << 27))
        throw QuadratureError("theta integral needs too many nodes", static_cast<double>(count));
    n.phi.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        n.phi[i] = characteristic(static_cast<double>(i) * n.h, p, pl);
    n.phi[0] *= 0.5;
    return n;
}

double density_u(const ThetaNodes& n, double u)
{
    const std::complex<double> step = std::polar(1.0, -n.h * u);
    std::complex<double> rot = 1.0, sum = 0.0;
    for (std::size_t i = 0; i < n.phi.size(); ++i) {
        if ((i & 511) == 0)
            rot = std::polar(1.0, -static_cast<double>(i) * n.h * u);
        sum += n.phi[i] * rot;
        rot *= step;
    }
    return n.h * sum.real() / pi;
}

} // namespace

double theta_form_density(const FringePattern& f, double x)
{
    const double u = x / f.delta_x;
    auto n = theta_nodes(f.p_c, f.p_lambda, std::fabs(u), 1.0);
    return density_u(n, u) / f.delta_x;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b, double dx)
{
    require(a.size() == b.size(), "l1_distance: size mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::fabs(a[i] - b[i]);
    return s * dx;
}

CrossCheck convolution_cross_check(const FringePattern& f, const std::vector<double>& x, unsigned workers)
{
    require(x.size() >= 2, "cross check needs at least two points");
    double u_max = 0;
    for (double v : x)
        u_max = std::max(u_max, std::fabs(v / f.delta_x));
    const auto coarse = theta_nodes(f.p_c, f.p_lambda, u_max, 1.0);
    const auto fine = theta_nodes(f.p_c, f.p_lambda, u_max, 2.0);

    std::vector<double> theta(x.size()), closed = decohered_pdf(f, x);
    num::parallel_for(x.size(), workers, [&](std::size_t i) { theta[i] = density_u(coarse, x[i] / f.delta_x) / f.delta_x; });

    CrossCheck c;
    c.l1 = l1_distance(theta, closed, x[1] - x[0]);
    const std::size_t stride = std::max<std::size_t>(1, x.size() / 64);
    for (std::size_t i = 0; i < x.size(); i += stride) {
        double d = std::fabs(density_u(fine, x[i] / f.delta_x) / f.delta_x - theta[i]);
        c.residual = std::max(c.residual, d * f.delta_x);
    }
    if (!(c.residual <= 1e-7))
        throw QuadratureError("theta integral did not converge", c.residual);
    return c;
}

} // namespace pf
