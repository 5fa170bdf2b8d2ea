#include "support.hpp"

#include "pulsefringe/analytic/airy.hpp"
#include "pulsefringe/analytic/extrema.hpp"
#include "pulsefringe/analytic/pdf.hpp"
#include "pulsefringe/analytic/protocol.hpp"
#include "pulsefringe/core/errors.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <doctest.h>

#include <algorithm>
#include <random>

using namespace pf;
using pf::test::rel;

namespace {

// Ai(x) from the Fourier integral shifted to Im t = c, where the integrand
// decays like exp(-c s^2); trapezoid on the real line.
double airy_contour(double x)
{
    const double c = x > 1 ? std::sqrt(x) : 1.0;
    const double h = 0.002;
    const double s_max = std::sqrt(40.0 / c);
    double sum = 0;
    for (double s = -s_max; s <= s_max; s += h)
        sum += std::exp(c * c * c / 3 - c * x - c * s * s) * std::cos(s * s * s / 3 + (x - c * c) * s);
    return sum * h / (2 * pi);
}

// Per-u density of the Airy-Gaussian convolution by brute-force quadrature.
double density_direct(double u, double p)
{
    const double w = 12 * p;
    const int n = 6000;
    const double h = 2 * w / n;
    double sum = 0;
    for (int i = 0; i <= n; ++i) {
        double v = -w + i * h;
        double f = airy(u - v) * std::exp(-v * v / (4 * p * p));
        sum += (i == 0 || i == n) ? 0.5 * f : f;
    }
    double I = sum * h;
    return I * I / (std::sqrt(2 * pi) * p);
}

double mean_of(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        xy[i] = x[i] * y[i];
    return trapezoid(x, xy) / trapezoid(x, y);
}

double variance_of(const std::vector<double>& x, const std::vector<double>& y)
{
    double m = mean_of(x, y);
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        d[i] = (x[i] - m) * (x[i] - m) * y[i];
    return trapezoid(x, d) / trapezoid(x, y);
}

struct CaseStudy {
    Particle part = particle_from_radius(50e-9);
    ProtocolParams p = pf::test::case_study().params;
    GaussianState s1 = free_evolve(thermal_state(part.mass, p.omega0, p.nbar), part.mass, p.tau1);
    double sx1 = std::sqrt(s1.var_x);
    CubicPulse pulse = make_pulse(p.omega_p, p.phi2, 1550e-9);
};

} // namespace

TEST_CASE("sigma_x after free fall")
{
    CaseStudy c;
    CHECK(rel(c.sx1, 1.1082760391e-08) < 1e-8);
    auto s0 = thermal_state(c.part.mass, c.p.omega0, 0.5);
    double xzp = zero_point_motion(c.part.mass, c.p.omega0);
    CHECK(rel(sigma_x_after_free_fall(s0, c.part.mass, 0.0), xzp * std::sqrt(2.0)) < 1e-14);

    double lam = 1e14;
    double with = sigma_x_after_free_fall(s0, c.part.mass, c.p.tau1, lam);
    CHECK(with > c.sx1);
    CHECK(rel(with, c.sx1) < 1e-3);
}

TEST_CASE("mapping condition")
{
    CaseStudy c;
    auto m = mapping_condition_omega2sq_tau2(c.p.tau1, c.p.tau3, c.p.omega4, c.p.tau4, c.s1, c.part.mass);
    CHECK(m.limit == doctest::Approx(2261.4201718679).epsilon(1e-12));

    auto far = mapping_condition_omega2sq_tau2(c.p.tau1, c.p.tau3, c.p.omega4, 1e-3, c.s1, c.part.mass);
    CHECK(rel(far.exact, far.limit) < 0.02);

    auto single = mapping_condition_omega2sq_tau2(c.p.tau1, 1e6, 0.0, 0.0, c.s1, c.part.mass);
    CHECK(rel(single.exact, 1 / c.p.tau1) < 1e-5);
    CHECK(rel(single.limit, 1 / c.p.tau1) < 1e-5);

    CHECK_THROWS_AS(mapping_condition_omega2sq_tau2(0.0, 1e-3, 0, 0, c.s1, c.part.mass), InvalidArgument);
}

TEST_CASE("cubic pulse coefficients")
{
    auto p = make_pulse(1e4, 0.1 * pi, 1550e-9);
    CHECK(p.omega2_sq == doctest::Approx(std::cos(0.2 * pi) * 1e8));
    CHECK(p.inv_l == doctest::Approx(2 * pi / 1550e-9 / 3 * std::tan(0.2 * pi)));
    CHECK(make_pulse(1e4, 0.0, 1550e-9).inv_l == 0);
    CHECK(rel(make_pulse(omega_p_for_omega2(2 * pi * 2.5e3, 0.05 * pi), 0.05 * pi, 1550e-9).omega2_sq,
              std::pow(2 * pi * 2.5e3, 2)) < 1e-14);
}

TEST_CASE("fringe ratio")
{
    CaseStudy c;
    double r = fringe_ratio(c.sx1, c.part.mass, c.pulse, c.p.tau2);
    CHECK(rel(r, 6.8759174990) < 1e-8);
    CHECK(1 / r == doctest::Approx(0.145).epsilon(0.01));
    CHECK(rel(fringe_ratio(2 * c.sx1, c.part.mass, c.pulse, c.p.tau2), 2 * r) < 1e-14);
    CHECK(rel(fringe_ratio(c.sx1, c.part.mass, c.pulse, 8 * c.p.tau2), 2 * r) < 1e-14);
    CHECK_THROWS_AS(fringe_ratio(c.sx1, c.part.mass, make_pulse(1e4, 0.0, 1550e-9), c.p.tau2), NoFringes);
}

TEST_CASE("sigma_c with inversion and the minima spacing")
{
    CaseStudy c;
    double sc = sigma_c_with_inversion(c.sx1, c.part.mass, c.p.tau3, c.p.omega4, c.p.tau4);
    CHECK(rel(sc, 3.9273999713e-10) < 1e-8);
    double d = 1e-5;
    double sc2 = sigma_c_with_inversion(c.sx1, c.part.mass, c.p.tau3, c.p.omega4, c.p.tau4 + d);
    CHECK(rel(sc2 / sc, std::exp(c.p.omega4 * d)) < 1e-13);

    auto f = pattern_with_inversion(c.sx1, c.part.mass, c.pulse, c.p.tau2, c.p.tau3, c.p.omega4, c.p.tau4, 0);
    CHECK(rel(1.75 * f.delta_x, 4.7257836830e-09) < 1e-8);
    CHECK(1.75 * f.delta_x > 4.5e-9);
    CHECK(1.75 * f.delta_x < 5.5e-9);
}

TEST_CASE("splitting geometry scales")
{
    auto s = pf::test::splitting_reference();
    auto& p = s.params;
    double m = s.particle.mass;
    auto s1 = free_evolve(thermal_state(m, p.omega0, p.nbar), m, p.tau1);
    double sx1 = std::sqrt(s1.var_x);
    auto pulse = make_pulse(p.omega_p, p.phi2, 1550e-9);
    auto f = pattern_no_inversion(sx1, m, pulse, p.tau2, p.tau3, 0, 0);
    CHECK(rel(f.delta_x, 2.4117548280e-08) < 1e-8);
    CHECK(2.23 * f.delta_x == doctest::Approx(50e-9).epsilon(0.1));

    auto g = pattern_no_inversion(sx1, m, pulse, p.tau2, 2 * p.tau3, 1e-27, 2e-27);
    auto h = pattern_no_inversion(sx1, m, pulse, p.tau2, p.tau3, 1e-27, 2e-27);
    CHECK(rel(g.delta_x, 2 * h.delta_x) < 1e-14);
    CHECK(rel(g.sigma_c, 2 * h.sigma_c) < 1e-14);
    CHECK(rel(g.sigma_lambda, 2 * h.sigma_lambda) < 1e-14);
    CHECK(rel(g.p_c, h.p_c) < 1e-14);
    CHECK(rel(g.p_lambda, h.p_lambda) < 1e-14);

    // the no-inversion scales give back the fringe ratio
    CHECK(rel(f.delta_x / f.sigma_c, fringe_ratio(sx1, m, pulse, p.tau2)) < 1e-10);
}

TEST_CASE("Airy function against independent evaluations")
{
    CHECK(airy(0.0) == doctest::Approx(0.355028053887817).epsilon(1e-13));
    CHECK(std::fabs(airy(airy_zero1)) < 1e-8);
    CHECK(std::fabs(airy(airy_zero2)) < 1e-8);
    CHECK(airy_zero1 == doctest::Approx(-2.33811).epsilon(1e-5));
    CHECK(airy_zero2 == doctest::Approx(-4.08795).epsilon(1e-5));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-15, 5);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        double x = u(rng);
        worst = std::max(worst, std::fabs(airy(x) - airy_contour(x)));
    }
    CHECK(worst < 1e-9);

    double worst_boost = 0;
    for (double x = -15; x <= 5; x += 0.01)
        worst_boost = std::max(worst_boost, std::fabs(airy(x) - boost::math::airy_ai(x)));
    CHECK(worst_boost < 1e-10);

    for (double x = 5; x < 30; x += 0.5)
        CHECK(rel(airy_scaled(x) * std::exp(-2.0 / 3 * std::pow(x, 1.5)), boost::math::airy_ai(x)) < 1e-9);
}

TEST_CASE("unitary density against direct convolution")
{
    for (double p : {0.05, 0.145, 0.4, 1.5}) {
        for (double u : {-12.0, -6.0, -3.2, -1.0, 0.0, 1.0}) {
            double want = density_direct(u, p);
            CAPTURE(p);
            CAPTURE(u);
            CHECK(std::fabs(unitary_density_u(u, p) - want) < 1e-9 * std::max(1.0, want));
        }
    }
}

TEST_CASE("unitary density tends to Ai^2 for a narrow kernel")
{
    const double p = 1e-3;
    for (double u = -5; u <= 2; u += 0.25) {
        double a = airy(u);
        if (std::fabs(a) < 0.05)
            continue;
        CHECK(rel(unitary_density_u(u, p), 2 * std::sqrt(2 * pi) * p * a * a) < 1e-4);
    }
}

TEST_CASE("case-study densities are normalized and non-negative")
{
    CaseStudy c;
    auto f = pattern_with_inversion(c.sx1, c.part.mass, c.pulse, c.p.tau2, c.p.tau3, c.p.omega4, c.p.tau4,
                                    0.465 * 2.7e-9);
    auto x = uniform_grid(recommended_grid(f));
    auto u = unitary_pdf(f, x);
    auto d = decohered_pdf(f, x);
    CHECK(std::fabs(trapezoid(x, u) - 1) < 1e-3);
    CHECK(std::fabs(trapezoid(x, d) - 1) < 1e-3);
    CHECK(*std::min_element(u.begin(), u.end()) >= 0);
    CHECK(*std::min_element(d.begin(), d.end()) >= 0);
}

TEST_CASE("decohered density with no blur equals the unitary one")
{
    auto f = FringePattern::canonical(0.2, 0.0);
    auto x = uniform_grid(recommended_grid(f));
    auto u = unitary_pdf(f, x);
    auto d = decohered_pdf(f, x);
    REQUIRE(u.size() == d.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(u[i] == d[i]);
}

TEST_CASE("grid refinement changes the decohered density by < 1e-4")
{
    auto f = FringePattern::canonical(0.145, 0.46);
    auto b = recommended_grid(f);
    auto x1 = uniform_grid(b.x_min, b.x_max, b.max_step);
    auto x2 = uniform_grid(b.x_min, b.x_max, b.max_step / 2);
    auto d1 = decohered_pdf(f, x1);
    auto d2 = decohered_pdf(f, x2);
    double worst = 0;
    for (std::size_t i = 0; i < d1.size(); ++i) {
        std::size_t j = static_cast<std::size_t>(std::lround((x1[i] - x2[0]) / (x2[1] - x2[0])));
        if (j < d2.size() && std::fabs(x2[j] - x1[i]) < 1e-9)
            worst = std::max(worst, std::fabs(d1[i] - d2[j]));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("grid checks report the required bounds")
{
    auto f = FringePattern::canonical(0.145, 0.46);
    auto b = required_grid(f, true);
    CHECK_THROWS_AS(decohered_pdf(f, uniform_grid(b.x_min / 2, b.x_max, b.max_step)), GridError);
    CHECK_THROWS_AS(decohered_pdf(f, uniform_grid(b.x_min, b.x_max, b.max_step * 3)), GridError);
    CHECK_NOTHROW(decohered_pdf(f, uniform_grid(b)));
    try {
        unitary_pdf(f, uniform_grid(-1, 1, 0.001));
        FAIL("expected GridError");
    } catch (const GridError& e) {
        std::string what = e.what();
        CHECK(what.find("need span") != std::string::npos);
        CHECK(what.find("spacing") != std::string::npos);
    }
}

TEST_CASE("moments: closed forms against quadrature")
{
    auto f = FringePattern::canonical(0.6, 0.0);
    auto x = uniform_grid(recommended_grid(f, 1e-9));
    auto u = unitary_pdf(f, x);
    auto m = moments_after_step4(f, 1.0, 1.0);
    CHECK(rel(mean_of(x, u), m.mean_x) < 1e-4);
    CHECK(rel(variance_of(x, u), m.var_x) < 1e-4);
    CHECK(m.mean_x == doctest::Approx(-1.0 / (4 * 0.36)));

    auto g = f.with_sigma_lambda(0.7);
    auto mg = moments_after_step4(g, 1.0, 1.0);
    CHECK(mg.var_x - m.var_x == doctest::Approx(0.49).epsilon(1e-12));
    CHECK(mg.mean_x == m.mean_x);

    auto tiny = FringePattern::make(1e-6, 1.0, 0.5);
    auto mt = moments_after_step4(tiny, 1.0, 1.0);
    CHECK(std::fabs(mt.mean_x) < 1e-15);
    CHECK(mt.x2 == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("property: blur keeps the mean and adds sigma_lambda^2 to the variance")
{
    auto base = FringePattern::canonical(0.5, 0.0);
    auto x = uniform_grid(recommended_grid(base.with_sigma_lambda(1.0), 1e-10));
    auto u = unitary_pdf(base, x);
    double mu = mean_of(x, u), vu = variance_of(x, u);
    CHECK(rel(mu, -1.0 / (4 * 0.25)) < 1e-4);
    for (double sl : {0.2, 0.5, 1.0}) {
        auto d = decohered_pdf(base.with_sigma_lambda(sl), x);
        CAPTURE(sl);
        CHECK(std::fabs(mean_of(x, d) - mu) < 1e-6 * std::fabs(mu));
        CHECK(rel(variance_of(x, d) - vu, sl * sl) < 1e-6);
    }
}

TEST_CASE("extrema")
{
    auto e = extrema_positions_u(1e-3, 0.0);
    CHECK(e.x_min1 == doctest::Approx(-2.33811).epsilon(1e-3 / 2.3));
    CHECK(e.x_min2 == doctest::Approx(-4.08795).epsilon(1e-3 / 4.1));
    CHECK(std::fabs(e.x_min1 - airy_zero1) < 1e-3);
    CHECK(std::fabs(e.x_min2 - airy_zero2) < 1e-3);
    CHECK(e.x_min1 - e.x_min2 == doctest::Approx(1.75).epsilon(0.01));
    CHECK(std::fabs(e.x_max1 - seed_max1) < 1e-3);
    CHECK(std::fabs(e.x_max2 - seed_max2) < 1e-3);

    // shift rule: positions move by about -p^4
    auto s = extrema_positions_u(0.3, 0.0);
    CHECK(s.x_max2 == doctest::Approx(seed_max2 - 0.0081).epsilon(0.02));

    auto f = FringePattern::make(2e-9, 0.3e-9, 0.0);
    auto em = extrema_positions(f);
    CHECK(em.x_min1 == doctest::Approx(2e-9 * extrema_positions_u(0.15, 0.0).x_min1));

    CHECK_THROWS_AS(extrema_positions_u(0.145, 3.0), NoFringes);
}

TEST_CASE("b_c residual")
{
    CaseStudy c;
    auto s = pf::test::case_study();
    s.params.omega_p = omega_p_from_mapping(s);
    auto pulse = make_pulse(s.params.omega_p, s.params.phi2, 1550e-9);
    auto zero = b_c_residual(s.params, c.s1, pulse, c.part.mass);

    auto up = s.params;
    up.omega_p *= std::sqrt(1.1);
    auto r_up = b_c_residual(up, c.s1, make_pulse(up.omega_p, up.phi2, 1550e-9), c.part.mass);
    auto down = s.params;
    down.omega_p *= std::sqrt(0.9);
    auto r_down = b_c_residual(down, c.s1, make_pulse(down.omega_p, down.phi2, 1550e-9), c.part.mass);

    CHECK(std::fabs(zero.b_c) < 1e-9 * std::fabs(r_up.b_c));
    CHECK(zero.sigma_bc_over_dx < 1e-4);
    CHECK(std::isfinite(r_up.sigma_bc_over_dx));
    CHECK(r_up.sigma_bc_over_dx > 0);
    CHECK(r_up.b_c * r_down.b_c < 0);
}

TEST_CASE("protocol parameter validation and warnings")
{
    auto p = pf::test::case_study().params;
    CHECK_NOTHROW(p.validate());
    CHECK(p.warnings().empty());

    auto q = p;
    q.phi2 = pi / 4;
    CHECK_THROWS_AS(q.validate(), InvalidArgument);
    q.phi2 = 0;
    CHECK_THROWS_AS(q.validate(), InvalidArgument);
    q = p;
    q.tau3 = -1;
    CHECK_THROWS_AS(q.validate(), InvalidArgument);

    q = p;
    q.tau1 = 1e-6;
    q.phi2 = 0.2 * pi;
    auto w = q.warnings();
    CHECK(w.size() == 2);
}
