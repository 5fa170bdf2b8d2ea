#include "pulsefringe/optimizer/optimizer.hpp"
#include "pulsefringe/core/errors.hpp"
#include "pulsefringe/environment/thermal.hpp"
#include "pulsefringe/numerics/parallel.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

namespace pf {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();
constexpr double phi_edge = 0.001;

struct Search {
    const OptimizerConfig& cfg;
    Geometry geometry;
    Particle particle;
    double lambda_bb = 0;
    double tau4 = 0; // used for the mapping condition and the pattern
    std::shared_ptr<const ContourFunction> contour;

    Scenario scenario(double tau1, double phi2) const
    {
        Scenario s;
        s.particle = particle;
        s.wavelength = cfg.wavelength;
        s.geometry = geometry;
        s.lambda_bb = lambda_bb;
        s.m_sigma = cfg.m_sigma;
        auto& p = s.params;
        p.omega0 = cfg.omega0;
        p.nbar = cfg.nbar;
        p.tau0 = cfg.tau0;
        p.tau1 = tau1;
        p.phi2 = phi2;
        p.tau2 = cfg.tau2;
        p.tau3 = cfg.tau_f - tau1;
        if (geometry == Geometry::inverted) {
            p.omega4 = cfg.omega4;
            p.tau4 = tau4;
        }
        p.omega_p = omega_p_from_mapping(s, cfg.mapping);
        return s;
    }

    struct Point {
        double residual = nan_v; // p_lambda - contour(p_c)
        double objective = nan_v;
    };

    Point point(double tau1, double phi2) const
    {
        Point pt;
        try {
            auto s = scenario(tau1, phi2);
            s.compute_metrics = false;
            auto e = evaluate_protocol(s);
            double target = (*contour)(e.pattern.p_c);
            if (std::isfinite(target))
                pt.residual = e.pattern.p_lambda - target;
            pt.objective = objective_of(s, e);
        } catch (const Error&) {
        }
        return pt;
    }

    // Contour crossing in phi2 on [a, b] where the residual changes sign.
    std::optional<double> crossing(double tau1, double a, double b) const
    {
        auto f = [&](double phi) { return point(tau1, phi).residual; };
        double fa = f(a), fb = f(b);
        if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0) == (fb > 0))
            return std::nullopt;
        boost::uintmax_t it = 80;
        auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(40),
                                                   it);
        return 0.5 * (r.first + r.second);
    }

    // Crossing closest to phi_guess, scanning outward in steps of dphi.
    std::optional<double> crossing_near(double tau1, double phi_guess, double dphi) const
    {
        const double lo_lim = phi_edge, hi_lim = pi / 4 - phi_edge;
        for (int k = 0; k < 4; ++k) {
            for (int side : {-1, 1}) {
                double a = phi_guess + side * k * dphi, b = a + side * dphi;
                if (a > b)
                    std::swap(a, b);
                a = std::max(a, lo_lim);
                b = std::min(b, hi_lim);
                if (b <= a)
                    continue;
                if (auto r = crossing(tau1, a, b))
                    return r;
            }
        }
        return std::nullopt;
    }
};

struct Candidate {
    double tau1 = 0;
    double phi2 = 0;
    double objective = 0;
};

bool better(const Candidate& a, const Candidate& b)
{
    if (a.objective != b.objective)
        return a.objective > b.objective;
    if (a.tau1 != b.tau1)
        return a.tau1 < b.tau1;
    return a.phi2 < b.phi2;
}

std::vector<Candidate> grid_candidates(const Search& S, std::vector<double>& tau1s, double& dphi)
{
    const auto& cfg = S.cfg;
    require(cfg.n_tau1 >= 3 && cfg.n_phi2 >= 3, "optimizer grid too small");
    tau1s = log_grid(1e-5, 0.99 * cfg.tau_f, cfg.n_tau1);
    std::vector<double> phis(static_cast<std::size_t>(cfg.n_phi2));
    dphi = (pi / 4 - 2 * phi_edge) / (cfg.n_phi2 - 1);
    for (int j = 0; j < cfg.n_phi2; ++j)
        phis[static_cast<std::size_t>(j)] = phi_edge + j * dphi;

    std::vector<std::vector<Candidate>> rows(tau1s.size());
    num::parallel_for(tau1s.size(), cfg.workers, [&](std::size_t i) {
        std::vector<double> g(phis.size());
        for (std::size_t j = 0; j < phis.size(); ++j)
            g[j] = S.point(tau1s[i], phis[j]).residual;
        for (std::size_t j = 0; j + 1 < phis.size(); ++j) {
            if (!std::isfinite(g[j]) || !std::isfinite(g[j + 1]) || (g[j] > 0) == (g[j + 1] > 0))
                continue;
            if (auto r = S.crossing(tau1s[i], phis[j], phis[j + 1])) {
                auto pt = S.point(tau1s[i], *r);
                if (std::isfinite(pt.objective))
                    rows[i].push_back({tau1s[i], *r, pt.objective});
            }
        }
    });
    std::vector<Candidate> all;
    for (auto& r : rows)
        all.insert(all.end(), r.begin(), r.end());
    std::sort(all.begin(), all.end(), better);
    return all;
}

// Brent refinement of tau1 along the contour branch through c.
Candidate refine_along_contour(const Search& S, const Candidate& c, const std::vector<double>& tau1s, double dphi)
{
    auto it = std::lower_bound(tau1s.begin(), tau1s.end(), c.tau1);
    std::size_t i = static_cast<std::size_t>(it - tau1s.begin());
    double lo = tau1s[i > 0 ? i - 1 : 0];
    double hi = tau1s[std::min(i + 1, tau1s.size() - 1)];
    Candidate best = c;
    std::mutex m;
    auto neg_obj = [&](double log_t) {
        double t = std::exp(log_t);
        auto phi = S.crossing_near(t, c.phi2, dphi / 2);
        if (!phi)
            return std::numeric_limits<double>::max();
        double obj = S.point(t, *phi).objective;
        if (!std::isfinite(obj))
            return std::numeric_limits<double>::max();
        Candidate cand{t, *phi, obj};
        std::lock_guard<std::mutex> lock(m);
        if (better(cand, best))
            best = cand;
        return -obj;
    };
    boost::uintmax_t iters = 60;
    boost::math::tools::brent_find_minima(neg_obj, std::log(lo), std::log(hi), 30, iters);
    return best;
}

// Exact contour solve in phi2 (full pattern metrics) around phi_guess.
std::optional<double> exact_phi2(const Search& S, double tau1, double phi_guess, double dphi)
{
    auto f = [&](double phi) {
        auto s = S.scenario(tau1, phi);
        auto e = evaluate_protocol(s);
        return e.metrics.quality - S.cfg.q_target;
    };
    double delta = dphi / 8;
    for (int k = 0; k < 6; ++k, delta *= 2) {
        double a = std::max(phi_edge, phi_guess - delta), b = std::min(pi / 4 - phi_edge, phi_guess + delta);
        double fa = f(a), fb = f(b);
        if ((fa > 0) != (fb > 0)) {
            boost::uintmax_t it = 80;
            auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                                       boost::math::tools::eps_tolerance<double>(40), it);
            return 0.5 * (r.first + r.second);
        }
    }
    return std::nullopt;
}

OptimizationResult finish(const Search& S, double tau1, double phi2, std::vector<std::string> flags)
{
    OptimizationResult r;
    Scenario s = S.scenario(tau1, phi2);
    s.compute_g1 = S.geometry == Geometry::splitting;
    auto e = evaluate_protocol(s);
    r.feasible = true;
    r.tau1 = tau1;
    r.tau3 = s.params.tau3;
    r.phi2 = phi2;
    r.tau4 = s.params.tau4;
    r.omega_p = s.params.omega_p;
    r.omega2 = std::sqrt(e.pulse.omega2_sq);
    r.objective = objective_of(s, e);
    r.pattern = e.pattern;
    r.metrics = e.metrics;
    r.g1 = e.coherence.g1_peaks;
    r.sigma_bc_over_dx = e.bc.sigma_bc_over_dx;
    r.lambda_bb = S.lambda_bb;
    r.conditional_flags = std::move(flags);
    r.scenario = s;
    if (!e.bc.valid)
        r.reason = "sigma_bc/delta_x >= 1";
    return r;
}

OptimizationResult infeasible(std::string why, std::vector<std::string> flags)
{
    OptimizationResult r;
    r.reason = std::move(why);
    r.conditional_flags = std::move(flags);
    return r;
}

void check_config(const OptimizerConfig& cfg)
{
    require(cfg.radius > 0, "radius must be positive");
    require(cfg.tau_f > 1.1e-5, "tau_f must exceed the smallest tau1 on the grid");
    require(cfg.q_target > 0, "q_target must be positive");
    require(cfg.tau2 > 0 && cfg.omega0 > 0, "tau2 and omega0 must be positive");
}

} // namespace

double objective_of(const Scenario& s, const Evaluation& e)
{
    return s.geometry == Geometry::inverted ? e.coherence.x_c_star : peak_distance_factor * e.pattern.delta_x;
}

std::shared_ptr<const ContourFunction> default_contour(double q_target, unsigned workers)
{
    static std::mutex m;
    static std::map<double, std::shared_ptr<const ContourFunction>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(q_target);
    if (it != cache.end())
        return it->second;
    auto c = quality_contour(q_target, log_grid(0.01, 1.5, 96), workers);
    if (c.empty())
        throw Infeasible("quality target above the largest attainable quality");
    auto f = std::make_shared<const ContourFunction>(c);
    cache.emplace(q_target, f);
    return f;
}

OptimizationResult optimize_coherence_length(const OptimizerConfig& cfg)
{
    check_config(cfg);
    require(cfg.omega4 > 0 && cfg.fringe_target > 0, "inverted potential and fringe target required");
    Search S{cfg, Geometry::inverted, particle_from_radius(cfg.radius, cfg.material), 0.0, 0.0, nullptr};
    std::vector<std::string> flags;
    double T_i = 0;
    if (cfg.bb) {
        auto th = duty_cycle_steady_state(S.particle, *cfg.bb, cfg.T_e, cfg.omega0, cfg.wavelength, cfg.tau0,
                                          cfg.tau_f);
        T_i = th.T_inf;
        S.lambda_bb = bb_localization_rate(S.particle, *cfg.bb, T_i, cfg.T_e);
        flags.push_back("blackbody_table:" + cfg.bb->provenance());
        if (cfg.bb->placeholder())
            flags.push_back("blackbody_placeholder");
    } else {
        flags.push_back("blackbody_excluded");
    }
    S.contour = cfg.contour ? cfg.contour : default_contour(cfg.q_target, cfg.workers);
    // shape does not depend on tau4; a long tau4 stands in until it is solved
    S.tau4 = 10.0 / cfg.omega4;

    std::vector<double> tau1s;
    double dphi = 0;
    auto cands = grid_candidates(S, tau1s, dphi);
    if (cands.empty())
        return infeasible("no (tau1, phi2) on the quality contour", flags);

    Candidate best = refine_along_contour(S, cands.front(), tau1s, dphi);
    double phi = best.phi2;
    for (int pass = 0; pass < 3; ++pass) {
        S.tau4 = tau4_for_fringe_spacing(S.scenario(best.tau1, phi), cfg.fringe_target);
        auto exact = exact_phi2(S, best.tau1, phi, dphi);
        if (!exact)
            return infeasible("exact contour solve failed near the optimum", flags);
        phi = *exact;
    }
    auto r = finish(S, best.tau1, phi, flags);
    r.T_i = T_i;
    r.candidates = static_cast<int>(cands.size());
    return r;
}

OptimizationResult optimize_splitting(const OptimizerConfig& cfg)
{
    check_config(cfg);
    Search S{cfg, Geometry::splitting, particle_from_radius(cfg.radius, cfg.material), 0.0, 0.0, nullptr};
    std::vector<std::string> flags{"blackbody_excluded", "gas_excluded"};
    S.contour = cfg.contour ? cfg.contour : default_contour(cfg.q_target, cfg.workers);

    std::vector<double> tau1s;
    double dphi = 0;
    auto cands = grid_candidates(S, tau1s, dphi);
    if (cands.empty())
        return infeasible("no (tau1, phi2) on the quality contour", flags);

    // best candidates first; the first one passing the g1 constraint wins
    const std::size_t tries = std::min<std::size_t>(cands.size(), 8);
    for (std::size_t k = 0; k < tries; ++k) {
        Candidate c = refine_along_contour(S, cands[k], tau1s, dphi);
        auto exact = exact_phi2(S, c.tau1, c.phi2, dphi);
        if (!exact)
            continue;
        auto r = finish(S, c.tau1, *exact, flags);
        if (r.g1 >= cfg.g1_min) {
            r.candidates = static_cast<int>(cands.size());
            return r;
        }
    }
    std::ostringstream s;
    s << "no contour point with g1 >= " << cfg.g1_min << " among the best " << tries << " candidates";
    return infeasible(s.str(), flags);
}

} // namespace pf
