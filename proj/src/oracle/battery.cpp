#include "pulsefringe/oracle/battery.hpp"
#include "pulsefringe/analytic/airy.hpp"
#include "pulsefringe/analytic/pdf.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/decoherence/budget.hpp"
#include "pulsefringe/numerics/parallel.hpp"
#include "pulsefringe/oracle/oracle.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace pf {

bool BatteryReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const BatteryCheck& c) { return c.passed; });
}

std::vector<ProtocolParams> random_oracle_protocols(int count, std::uint64_t seed, const Particle& particle,
                                                    double wavelength)
{
    std::mt19937_64 rng(seed);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    const double m = particle.mass;
    std::vector<ProtocolParams> out;
    while (static_cast<int>(out.size()) < count) {
        ProtocolParams p;
        p.omega0 = 2.0 * pi * uni(80e3, 150e3);
        p.nbar = 0;
        p.tau1 = uni(0.2e-3, 0.8e-3);
        p.phi2 = pi * uni(0.03, 0.2);
        p.tau2 = std::exp(uni(std::log(1e-7), std::log(1e-6)));
        p.tau3 = uni(0.2e-3, 0.8e-3);
        p.omega4 = 2.0 * pi * uni(2e3, 10e3);
        p.tau4 = uni(0.3, 1.5) / p.omega4;
        auto s1 = free_evolve(thermal_state(m, p.omega0, 0.0), m, p.tau1);
        auto mc = mapping_condition_omega2sq_tau2(p.tau1, p.tau3, p.omega4, p.tau4, s1, m);
        p.omega_p = omega_p_for_omega2(std::sqrt(mc.exact / p.tau2), p.phi2);
        auto bc = b_c_residual(p, s1, make_pulse(p.omega_p, p.phi2, wavelength), m, MappingForm::exact);
        if (bc.sigma_bc_over_dx < 0.3)
            out.push_back(p);
    }
    return out;
}

OracleComparison compare_with_analytic(const ProtocolParams& p, const Particle& particle, double delta_x_scale,
                                       std::size_t max_points)
{
    OracleOptions opt;
    opt.max_points = max_points;
    const double m = particle.mass;
    auto grid = oracle_grid(p, particle, PotentialMode::polynomial, opt);
    auto run = propagate_protocol_run(p, particle, grid, PotentialMode::polynomial, opt);
    auto ref = oracle_reference_pattern(p, particle, opt);
    if (delta_x_scale != 1.0)
        ref = FringePattern::make(ref.delta_x * delta_x_scale, ref.sigma_c, 0.0);
    auto xs = grid.points();
    std::vector<double> analytic(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        analytic[i] = unitary_density(ref, xs[i]);

    OracleComparison c;
    c.l1 = l1_distance(run.frames.back().density(), analytic, grid.dx());
    auto s1 = free_evolve(thermal_state(m, p.omega0, 0.0), m, p.tau1);
    c.sigma_bc_over_dx =
        b_c_residual(p, s1, make_pulse(p.omega_p, p.phi2, opt.wavelength), m, MappingForm::exact).sigma_bc_over_dx;
    c.points = grid.n;
    c.leakage = run.leakage;
    return c;
}

namespace {

BatteryCheck check(std::string name, double value, double tol)
{
    return {std::move(name), value, tol, value <= tol};
}

double relative(double a, double b)
{
    return std::fabs(a - b) / std::fabs(b);
}

} // namespace

BatteryReport run_oracle_battery(const BatteryOptions& opt)
{
    BatteryReport r;
    const auto particle = particle_from_radius(opt.radius);
    const double m = particle.mass;

    // trap ground state over one period
    {
        ProtocolParams p;
        p.omega0 = 2.0 * pi * 100e3;
        p.tau1 = p.tau3 = 1e-4;
        p.phi2 = 0.1 * pi;
        p.omega_p = 1e4;
        p.tau2 = 1e-6;
        OracleOptions o;
        o.last_step = 0;
        o.step0_time = 2.0 * pi / p.omega0;
        o.omega_dt = 1e-4;
        o.max_points = opt.max_points;
        auto grid = oracle_grid(p, particle, PotentialMode::polynomial, o);
        auto run = propagate_protocol_run(p, particle, grid, PotentialMode::polynomial, o);
        auto variance = [&](const WavefunctionFrame& f) {
            double s = 0;
            for (std::size_t i = 0; i < f.psi.size(); ++i)
                s += f.grid.x(i) * f.grid.x(i) * std::norm(f.psi[i]);
            return s * f.grid.dx();
        };
        const auto& a = run.frames.front();
        const auto& b = run.frames.back();
        r.checks.push_back(check("ground_state_norm", std::fabs(b.norm() - a.norm()), 1e-8));
        r.checks.push_back(check("ground_state_variance", relative(variance(b), variance(a)), 1e-8));
    }

    // randomized protocols against the analytic density
    {
        auto protocols = random_oracle_protocols(opt.protocols, opt.seed, particle);
        std::vector<OracleComparison> cmp(protocols.size());
        num::parallel_for(protocols.size(), opt.workers, [&](std::size_t i) {
            cmp[i] = compare_with_analytic(protocols[i], particle, opt.delta_x_scale, opt.max_points);
        });
        for (std::size_t i = 0; i < cmp.size(); ++i)
            r.checks.push_back(check("protocol_" + std::to_string(i + 1) + "_l1", cmp[i].l1, 2e-2));
    }

    // theta-integral form against the closed form
    {
        auto f = FringePattern::canonical(0.145, 0.05);
        auto x = uniform_grid(-60.0, 8.0, 0.004);
        r.checks.push_back(check("theta_form_case_study_l1", convolution_cross_check(f, x, opt.workers).l1, 1e-3));
        auto g = FringePattern::canonical(30.0, 0.0);
        auto xg = uniform_grid(-200.0, 200.0, 0.05);
        r.checks.push_back(check("theta_form_gaussian_limit_l1", convolution_cross_check(g, xg, opt.workers).l1, 1e-4));
    }

    // second moments
    {
        const double w0 = 2.0 * pi * 100e3, lambda = 1e15, t = 5e-3;
        auto s0 = thermal_state(m, w0, 0.5);
        auto ode = covariance_evolution(s0, m, lambda, Potential::free, 0.0, t);
        auto fixed = covariance_evolution(s0, m, lambda, Potential::free, 0.0, t, {1e-10, 20000});
        auto closed = free_evolve(s0, m, t, lambda);
        const double d = 2.0 * hbar * hbar * lambda;
        r.checks.push_back(check("covariance_var_p", relative(ode.var_p, s0.var_p + d * t), 1e-6));
        r.checks.push_back(check("covariance_var_x",
                                 relative(ode.var_x, s0.var_x + s0.var_p * t * t / (m * m) + d * t * t * t / (3 * m * m)),
                                 1e-6));
        r.checks.push_back(check("covariance_vs_free_flight", relative(ode.var_x, closed.var_x), 1e-6));
        r.checks.push_back(
            check("covariance_purity", relative(ode.purity, purity_after_free_fall(0.5, lambda, t, std::sqrt(ode.var_x))),
                  1e-6));
        r.checks.push_back(check("covariance_fixed_vs_adaptive",
                                 std::max(relative(fixed.var_x, ode.var_x), relative(fixed.var_p, ode.var_p)), 1e-9));
    }

    // Airy zeros by root finding on the Airy implementation
    {
        auto zero = [](double lo, double hi) {
            boost::uintmax_t it = 100;
            auto res = boost::math::tools::toms748_solve([](double x) { return airy(x); }, lo, hi,
                                                         boost::math::tools::eps_tolerance<double>(50), it);
            return 0.5 * (res.first + res.second);
        };
        r.checks.push_back(check("airy_zero_1", std::fabs(zero(-2.6, -2.0) - (-2.33811)), 1e-4));
        r.checks.push_back(check("airy_zero_2", std::fabs(zero(-4.3, -3.8) - (-4.08795)), 1e-4));
    }
    return r;
}

} // namespace pf
