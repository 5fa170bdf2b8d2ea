#include "pulsefringe/optimizer/pipeline.hpp"
#include "pulsefringe/core/errors.hpp"

#include <cmath>

namespace pf {

namespace {

double omega4_of(const Scenario& s)
{
    return s.geometry == Geometry::inverted ? s.params.omega4 : 0.0;
}

double tau4_of(const Scenario& s)
{
    return s.geometry == Geometry::inverted ? s.params.tau4 : 0.0;
}

} // namespace

double omega_p_from_mapping(const Scenario& s, MappingForm form)
{
    const auto& p = s.params;
    require(p.tau2 > 0, "mapping condition needs tau2 > 0");
    const double m = s.particle.mass;
    auto s1 = free_evolve(thermal_state(m, p.omega0, p.nbar), m, p.tau1, s.lambda_bb);
    auto mc = mapping_condition_omega2sq_tau2(p.tau1, p.tau3, omega4_of(s), tau4_of(s), s1, m);
    double w2sq_t2 = form == MappingForm::exact ? mc.exact : mc.limit;
    require(w2sq_t2 > 0, "mapping condition gives a non-positive pulse strength");
    return omega_p_for_omega2(std::sqrt(w2sq_t2 / p.tau2), p.phi2);
}

Evaluation evaluate_protocol(const Scenario& s)
{
    const auto& p = s.params;
    p.validate();
    require(p.tau1 > 0 && p.tau2 > 0 && p.tau3 > 0, "tau1, tau2 and tau3 must be positive");
    const Particle& part = s.particle;
    const double m = part.mass;

    Evaluation e;
    e.warnings = p.warnings();
    e.x_zp = zero_point_motion(m, p.omega0);
    e.state0 = thermal_state(m, p.omega0, p.nbar);
    ProtocolParams q = p;
    if (s.geometry == Geometry::splitting) {
        q.omega4 = 0;
        q.tau4 = 0;
    }
    e.rates = protocol_rates(q, part, s.wavelength, s.lambda_bb);
    e.state1 = free_evolve(e.state0, m, p.tau1, e.rates.lambda1);
    e.sigma_x1 = std::sqrt(e.state1.var_x);
    e.pulse = make_pulse(p.omega_p, p.phi2, s.wavelength);

    if (s.geometry == Geometry::inverted) {
        require(p.omega4 > 0, "inverted geometry needs omega4 > 0");
        e.budget = blurring_budget(q, part, e.rates, e.sigma_x1, p.nbar);
        e.pattern = pattern_with_inversion(e.sigma_x1, m, e.pulse, p.tau2, p.tau3, p.omega4, p.tau4,
                                           e.budget.sigma_lambda);
    } else {
        e.budget = blurring_budget_no_inversion(q, part, e.rates, e.sigma_x1, p.nbar);
        e.pattern = pattern_from_map(e.sigma_x1, m, e.pulse, p.tau2, p.tau3 / m, e.budget.sigma_lambda);
    }
    e.bc = b_c_residual(q, e.state1, e.pulse, m);
    if (!e.bc.valid)
        e.warnings.push_back("sigma_bc/delta_x >= 1, quadratic phase not negligible");

    e.coherence.x_c = coherence_length(e.state1);
    e.coherence.x_c_star = certified_lower_bound(e.sigma_x1, e.pattern.sigma_c, e.pattern.sigma_lambda);
    if (!s.compute_metrics)
        return e;

    try {
        e.extrema = extrema_positions(e.pattern);
        e.metrics = pattern_metrics(e.pattern, e.extrema, s.m_sigma);
        e.fringes = e.metrics.fringes;
        e.peak_distance = std::fabs(e.extrema.x_max1 - e.extrema.x_max2);
    } catch (const NoFringes&) {
        e.metrics = PatternMetrics{};
        e.metrics.n_runs = run_count(0, s.m_sigma);
        e.fringes = false;
    }

    if (s.compute_g1 && e.fringes && s.geometry == Geometry::splitting) {
        auto post = post_pulse_state(e.state1, m, e.pulse, p.tau2, e.rates.lambda2);
        e.coherence.g1_peaks = g1_numeric(e.extrema.x_max1, e.extrema.x_max2, post, p.tau3);
    }
    return e;
}

double tau4_for_fringe_spacing(const Scenario& s, double target)
{
    require(s.geometry == Geometry::inverted && s.params.omega4 > 0, "tau4 solve needs the inverted potential");
    require(target > 0, "fringe target must be positive");
    const double dx0 = pattern_with_inversion(1.0, s.particle.mass, make_pulse(s.params.omega_p, s.params.phi2,
                                                                                s.wavelength),
                                              s.params.tau2, s.params.tau3, s.params.omega4, 0.0, 0.0)
                           .delta_x;
    // delta_x does not depend on sigma_x1
    const double t = std::log(target / (minima_spacing_factor * dx0)) / s.params.omega4;
    return t > 0 ? t : 0.0;
}

} // namespace pf
