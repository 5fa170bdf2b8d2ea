#include "pulsefringe/cli/commands.hpp"
#include "pulsefringe/analytic/pdf.hpp"
#include "pulsefringe/cli/config.hpp"
#include "pulsefringe/cli/records.hpp"
#include "pulsefringe/environment/gas.hpp"
#include "pulsefringe/environment/thermal.hpp"
#include "pulsefringe/numerics/parallel.hpp"
#include "pulsefringe/optimizer/optimizer.hpp"
#include "pulsefringe/oracle/battery.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

namespace pf::cli {

namespace {

struct Loaded {
    ScenarioConfig cfg;
    std::optional<BlackBodyModel> bb;
    std::vector<std::string> flags;
};

Loaded load(const CommonOptions& opt)
{
    if (opt.config.empty())
        throw ConfigError({"--config is required"});
    Loaded l{load_config(opt.config), std::nullopt, {}};
    if (opt.m_sigma) {
        if (!(*opt.m_sigma > 0))
            throw ConfigError({"--m-sigma: must be positive"});
        l.cfg.m_sigma = *opt.m_sigma;
    }
    const std::string path = opt.bb_table.empty() ? l.cfg.bb_table : opt.bb_table;
    if (!path.empty()) {
        try {
            l.bb = BlackBodyModel::load(path);
        } catch (const Error& e) {
            throw ConfigError({std::string("bb_table: ") + e.what()});
        }
        l.flags.push_back("blackbody_table:" + l.bb->provenance());
        if (l.bb->placeholder())
            l.flags.push_back("blackbody_placeholder");
    } else {
        l.flags.push_back("blackbody_excluded");
    }
    std::filesystem::create_directories(opt.out_dir);
    return l;
}

std::string out_path(const CommonOptions& opt, const std::string& name)
{
    return (std::filesystem::path(opt.out_dir) / name).string();
}

OptimizerConfig optimizer_config(const ScenarioConfig& c, const BlackBodyModel* bb, unsigned workers)
{
    OptimizerConfig o;
    o.radius = c.radius;
    o.material = c.material;
    o.wavelength = c.wavelength;
    o.T_e = c.T_e;
    o.tau_f = c.tau_f;
    o.q_target = c.q_target;
    o.fringe_target = c.fringe_target;
    o.g1_min = c.g1_min;
    o.omega0 = c.params.omega0;
    o.omega4 = c.params.omega4;
    o.tau2 = c.params.tau2;
    o.tau0 = c.params.tau0;
    o.nbar = c.params.nbar;
    o.m_sigma = c.m_sigma;
    o.mapping = c.mapping;
    o.n_tau1 = c.n_tau1;
    o.n_phi2 = c.n_phi2;
    o.workers = workers;
    o.bb = bb;
    return o;
}

void write_pattern_csv(const std::string& path, const FringePattern& f, const std::vector<std::string>& flags)
{
    auto x = uniform_grid(recommended_grid(f));
    auto u = unitary_pdf(f, x);
    auto d = decohered_pdf(f, x);
    std::ofstream out(path);
    if (!out)
        throw InvalidArgument("cannot write " + path);
    std::vector<std::string> comments = {
        "x_m: position after the protocol [m]; unitary_per_m, decohered_per_m: probability density [1/m]",
        "delta_x_m = " + std::to_string(f.delta_x) + ", sigma_c_m = " + std::to_string(f.sigma_c) +
            ", sigma_lambda_m = " + std::to_string(f.sigma_lambda)};
    for (auto& fl : flags)
        comments.push_back("flag: " + fl);
    write_columns_csv(out, comments, {"x_m", "unitary_per_m", "decohered_per_m"}, {x, u, d});
}

json thermal_json(const DutyCycleOutcome& t)
{
    return {{"p_abs_W", t.p_abs},
            {"T_ss_K", t.T_ss},
            {"T_duty_averaged_K", t.T_averaged},
            {"T_inf_K", t.T_inf},
            {"runs_to_steady", t.runs_to_steady},
            {"low_T_fit_units", "p_bb in W/m^3 and gamma_bb in 1/(m^5 s), unit prefactor assumed"}};
}

// The entered omega2 read as the harmonic stiffness (used) and as omega_p, next to
// the mapping-condition values.
json pulse_readings(const ScenarioConfig& c, const Scenario& s)
{
    auto omega2_of = [&](double omega_p) { return omega_p * std::sqrt(std::cos(2.0 * s.params.phi2)); };
    auto summary = [](const Evaluation& e) {
        return json{{"p_c", e.pattern.p_c},
                    {"fringe_spacing_1_75_delta_x_m", minima_spacing_factor * e.pattern.delta_x},
                    {"quality", e.metrics.quality},
                    {"sigma_bc_over_dx", e.bc.sigma_bc_over_dx}};
    };
    json r;
    r["used_omega2_rad_s"] = omega2_of(s.params.omega_p);
    r["used_omega_p_rad_s"] = s.params.omega_p;
    for (auto [name, form] : {std::pair{"mapping_exact_omega2_rad_s", MappingForm::exact},
                              std::pair{"mapping_limit_omega2_rad_s", MappingForm::limit}}) {
        try {
            r[name] = omega2_of(omega_p_from_mapping(s, form));
        } catch (const Error&) {
            r[name] = nullptr;
        }
    }
    if (c.pulse_input == PulseInput::omega2) {
        auto alt = s;
        alt.params.omega_p = c.omega2;
        alt.compute_g1 = false;
        json a{{"omega_p_rad_s", c.omega2}, {"omega2_rad_s", omega2_of(c.omega2)}};
        try {
            a["evaluation"] = summary(evaluate_protocol(alt));
        } catch (const Error& err) {
            a["evaluation"] = err.what();
        }
        r["entered_omega2_as_omega_p"] = a;
    }
    return r;
}

} // namespace

int cmd_case_study(const CommonOptions& opt, std::ostream& log)
{
    auto L = load(opt);
    const auto& c = L.cfg;
    Scenario s;
    s.particle = particle_from_radius(c.radius, c.material);
    s.wavelength = c.wavelength;
    s.params = c.params;
    s.geometry = c.geometry;
    s.m_sigma = c.m_sigma;
    s.compute_g1 = c.geometry == Geometry::splitting;
    if (c.pulse_input == PulseInput::mapping)
        s.params.omega_p = omega_p_from_mapping(s, c.mapping);

    json rec = record_header("case-study", c);
    std::optional<DutyCycleOutcome> thermal;
    if (L.bb) {
        thermal = duty_cycle_steady_state(s.particle, *L.bb, c.T_e, c.params.omega0, c.wavelength, c.params.tau0,
                                          c.tau_f);
        s.lambda_bb = bb_localization_rate(s.particle, *L.bb, thermal->T_inf, c.T_e);
    } else {
        L.flags.push_back("lambda_bb_zero_fallback");
    }
    auto e = evaluate_protocol(s);

    GasModel gas{c.gas_mass, c.T_gas, c.pressure};
    const double p_free = c.pressure > 0 ? no_collision_probability(gas, c.radius, c.tau_f, true) : 1.0;

    rec["particle"] = {{"radius_m", c.radius}, {"mass_kg", s.particle.mass}, {"x_zp_m", e.x_zp}};
    rec["protocol"] = to_json(s.params);
    rec["pattern"] = to_json(e.pattern);
    rec["budget"] = to_json(e.budget);
    rec["lambda_bb_per_m2_s"] = s.lambda_bb;
    rec["rates_per_m2_s"] = {{"lambda1", e.rates.lambda1}, {"lambda2", e.rates.lambda2},
                             {"lambda3", e.rates.lambda3}, {"lambda4", e.rates.lambda4}};
    rec["sigma_x1_m"] = e.sigma_x1;
    rec["sigma_bc_over_dx"] = e.bc.sigma_bc_over_dx;
    rec["fringes"] = e.fringes;
    if (e.fringes)
        rec["extrema"] = to_json(e.extrema);
    rec["metrics"] = to_json(e.metrics);
    rec["coherence"] = to_json(e.coherence);
    rec["thermal"] = thermal ? thermal_json(*thermal) : json(nullptr);
    rec["gas"] = {{"pressure_Pa", c.pressure}, {"no_collision_probability_axis", p_free}};
    rec["pulse_readings"] = pulse_readings(c, s);
    rec["warnings"] = e.warnings;
    rec["conditional_flags"] = L.flags;
    write_json(out_path(opt, "case_study.json"), rec);
    write_pattern_csv(out_path(opt, "case_study_pattern.csv"), e.pattern, L.flags);

    log << std::setprecision(4) << "p_c = " << e.pattern.p_c << ", p_lambda = " << e.pattern.p_lambda
        << ", 1.75 delta_x = " << 1.75 * e.pattern.delta_x * 1e9 << " nm\n"
        << "v = " << e.metrics.visibility << ", p_r = " << e.metrics.p_r << ", q = " << e.metrics.quality
        << ", x_c* = " << e.coherence.x_c_star * 1e9 << " nm\n";
    for (auto& f : L.flags)
        log << "flag: " << f << "\n";
    return exit_ok;
}

int cmd_sweep(const CommonOptions& opt, std::ostream& log)
{
    auto L = load(opt);
    const auto& c = L.cfg;
    auto axis = [&](const char* key, const std::vector<double>& v, double fallback) {
        return c.raw.has(key) ? v : std::vector<double>{fallback};
    };
    const auto radii = axis("sweep_radius_nm", c.sweep_radius, c.radius);
    const auto temps = axis("sweep_T_e_k", c.sweep_T_e, c.T_e);
    const auto taus = axis("sweep_tau_f_ms", c.sweep_tau_f, c.tau_f);

    struct Point {
        double radius, T_e, tau_f;
    };
    std::vector<Point> points;
    for (double r : radii)
        for (double t : temps)
            for (double f : taus)
                points.push_back({r, t, f});

    std::vector<OptimizationResult> results(points.size());
    std::vector<std::string> errors(points.size());
    if (!points.empty()) {
        auto contour = default_contour(c.q_target, opt.workers);
        const BlackBodyModel* bb = L.bb ? &*L.bb : nullptr;
        num::parallel_for(points.size(), opt.workers, [&](std::size_t i) {
            auto oc = optimizer_config(c, bb, 1);
            oc.radius = points[i].radius;
            oc.T_e = points[i].T_e;
            oc.tau_f = points[i].tau_f;
            oc.contour = contour;
            try {
                results[i] = optimize_coherence_length(oc);
            } catch (const Error& e) {
                results[i].feasible = false;
                errors[i] = e.what();
            }
        });
    }

    std::ofstream out(out_path(opt, "sweep.csv"));
    if (!out)
        throw InvalidArgument("cannot write sweep.csv");
    out << "# pulsefringe " << PULSEFRINGE_VERSION << " coherence-length sweep\n"
        << "# q_target = " << c.q_target << ", fringe_target_nm = " << c.fringe_target * 1e9 << "\n"
        << "# units in column names; x_c_star_nm empty when infeasible; flags separated by ';'\n";
    for (auto& f : L.flags)
        out << "# flag: " << f << "\n";
    out << "radius_nm,T_e_k,tau_f_ms,feasible,x_c_star_nm,tau1_ms,tau3_ms,phi2_pi,tau4_ms,omega2_khz,"
           "visibility,p_r,quality,T_i_k,lambda_bb_per_m2_s,flags,reason\n";
    out << std::setprecision(10);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& r = results[i];
        std::string flags;
        for (auto& f : r.conditional_flags)
            flags += (flags.empty() ? "" : ";") + f;
        std::string reason = errors[i].empty() ? r.reason : errors[i];
        for (auto* field : {&flags, &reason})
            for (auto& ch : *field)
                if (ch == ',' || ch == '\n')
                    ch = ' ';
        out << points[i].radius * 1e9 << "," << points[i].T_e << "," << points[i].tau_f * 1e3 << ","
            << (r.feasible ? 1 : 0) << ",";
        if (r.feasible)
            out << r.objective * 1e9 << "," << r.tau1 * 1e3 << "," << r.tau3 * 1e3 << "," << r.phi2 / pi << ","
                << r.tau4 * 1e3 << "," << r.omega2 / (2 * pi) * 1e-3 << "," << r.metrics.visibility << ","
                << r.metrics.p_r << "," << r.metrics.quality << ",";
        else
            out << ",,,,,,,,,";
        out << r.T_i << "," << r.lambda_bb << "," << flags << "," << reason << "\n";
        log << "r = " << points[i].radius * 1e9 << " nm, T_e = " << points[i].T_e
            << " K, tau_f = " << points[i].tau_f * 1e3 << " ms: "
            << (r.feasible ? "x_c* = " + std::to_string(r.objective * 1e9) + " nm" : "infeasible (" + reason + ")")
            << "\n";
    }
    return exit_ok;
}

int cmd_optimize_splitting(const CommonOptions& opt, std::ostream& log)
{
    auto L = load(opt);
    auto oc = optimizer_config(L.cfg, nullptr, opt.workers);
    auto r = optimize_splitting(oc);
    json rec = record_header("optimize-splitting", L.cfg);
    rec["result"] = to_json(r);
    rec["peak_distance_m"] = r.feasible ? peak_distance_factor * r.pattern.delta_x : 0.0;
    rec["conditional_flags"] = r.conditional_flags;
    write_json(out_path(opt, "splitting.json"), rec);
    if (!r.feasible) {
        log << "infeasible: " << r.reason << "\n";
        return exit_infeasible;
    }
    write_pattern_csv(out_path(opt, "splitting_pattern.csv"), r.pattern, r.conditional_flags);
    log << std::setprecision(4) << "tau1 = " << r.tau1 * 1e3 << " ms, tau3 = " << r.tau3 * 1e3
        << " ms, phi2 = " << r.phi2 / (pi / 4) << " pi/4, omega2 = 2pi " << r.omega2 / (2 * pi) << " Hz\n"
        << "2.23 delta_x = " << r.objective * 1e9 << " nm, g1 = " << r.g1 << "\n";
    return exit_ok;
}

int cmd_oracle_validate(const CommonOptions& opt, std::ostream& log)
{
    auto L = load(opt);
    BatteryOptions b;
    b.protocols = L.cfg.oracle_protocols;
    b.seed = L.cfg.oracle_seed;
    b.radius = L.cfg.radius;
    b.delta_x_scale = opt.debug_delta_x_scale;
    b.max_points = opt.max_grid_points;
    b.workers = opt.workers;
    auto report = run_oracle_battery(b);
    json rec = record_header("oracle-validate", L.cfg);
    json checks = json::array();
    for (auto& ch : report.checks) {
        checks.push_back({{"name", ch.name}, {"value", ch.value}, {"tolerance", ch.tolerance}, {"passed", ch.passed}});
        log << (ch.passed ? "pass " : "FAIL ") << ch.name << " = " << std::setprecision(3) << ch.value
            << " (tolerance " << ch.tolerance << ")\n";
    }
    rec["checks"] = checks;
    rec["passed"] = report.passed();
    write_json(out_path(opt, "oracle_validation.json"), rec);
    return report.passed() ? exit_ok : exit_validation;
}

int cmd_pressure_requirement(const CommonOptions& opt, std::ostream& log)
{
    auto L = load(opt);
    const auto& c = L.cfg;
    GasModel gas{c.gas_mass, c.T_gas, 1.0};
    const double p = pressure_for_quantile(gas, c.radius, c.tau_f, c.quantile);
    json rec = record_header("pressure-requirement", c);
    rec["quantile"] = c.quantile;
    rec["pressure_Pa"] = p;
    rec["pressure_mbar"] = p / pa_per_mbar;
    gas.pressure = p;
    rec["collision_rate_per_s"] = gas_collision_rate(gas, c.radius);
    write_json(out_path(opt, "pressure_requirement.json"), rec);
    log << std::setprecision(4) << "P_" << c.quantile << " = " << p / pa_per_mbar << " mbar\n";
    return exit_ok;
}

int cmd_thermal(const CommonOptions& opt, std::ostream& log)
{
    auto L = load(opt);
    if (!L.bb)
        throw ConfigError({"thermal needs a black-body table: pass --bb-table or set bb_table"});
    const auto& c = L.cfg;
    auto particle = particle_from_radius(c.radius, c.material);
    auto t = duty_cycle_steady_state(particle, *L.bb, c.T_e, c.params.omega0, c.wavelength, c.params.tau0, c.tau_f);
    DutyCycle duty{t.p_abs, c.params.tau0, c.tau_f};
    auto h = internal_temperature_evolution(particle, *L.bb, c.T_e, duty, c.thermal_runs, t.T_ss);
    json rec = record_header("thermal", c);
    rec["thermal"] = thermal_json(t);
    rec["history"] = {{"runs", c.thermal_runs}, {"T_last_run_average_K", h.T_steady},
                      {"T_min_last_K", h.T_min_last}, {"T_max_last_K", h.T_max_last},
                      {"runs_to_steady", h.runs_to_steady}};
    rec["lambda_bb_per_m2_s"] = bb_localization_rate(particle, *L.bb, t.T_inf, c.T_e);
    rec["conditional_flags"] = L.flags;
    write_json(out_path(opt, "thermal.json"), rec);
    std::ofstream out(out_path(opt, "thermal.csv"));
    write_columns_csv(out, {"time_s: since the first run; T_i_K: internal temperature [K]"}, {"time_s", "T_i_K"},
                      {h.time, h.T_i});
    log << std::setprecision(5) << "T_ss = " << t.T_ss << " K, T_i(inf) = " << t.T_inf << " K after "
        << t.runs_to_steady << " runs\n";
    for (auto& f : L.flags)
        log << "flag: " << f << "\n";
    return exit_ok;
}

int run_cli(int argc, char** argv, std::ostream& log, std::ostream& err)
{
    CLI::App app{"Cubic-phase matter-wave interferometry: protocol analysis, optimization and validation"};
    app.require_subcommand(1);
    CommonOptions opt;
    double m_sigma = 5.0;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "scenario config (flat key = value, unit-suffixed keys)")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--workers", opt.workers, "worker threads (0: all cores)");
        sub->add_option("--bb-table", opt.bb_table, "black-body table CSV");
        sub->add_option("--m-sigma", m_sigma, "detection confidence in standard deviations")->default_val(5.0);
    };
    std::vector<std::pair<CLI::App*, std::function<int(const CommonOptions&, std::ostream&)>>> subs;
    auto add = [&](const char* name, const char* help, auto fn) {
        auto* s = app.add_subcommand(name, help);
        common(s);
        subs.emplace_back(s, fn);
        return s;
    };
    add("case-study", "full pipeline for one parameter set", cmd_case_study);
    add("sweep", "coherence-length optimum over radius, temperature and free-time ranges", cmd_sweep);
    add("optimize-splitting", "coherent-splitting optimum (no inverted potential)", cmd_optimize_splitting);
    auto* ov = add("oracle-validate", "numerical oracle battery", cmd_oracle_validate);
    ov->add_option("--debug-delta-x-scale", opt.debug_delta_x_scale, "stretch the analytic fringe spacing");
    ov->add_option("--max-grid-points", opt.max_grid_points, "largest oracle grid");
    add("pressure-requirement", "gas pressure for a collision-free quantile", cmd_pressure_requirement);
    add("thermal", "internal-temperature duty cycle", cmd_thermal);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, log, err);
        return code == 0 ? exit_ok : exit_config;
    }
    for (auto& [sub, fn] : subs) {
        if (!sub->parsed())
            continue;
        if (sub->get_option("--m-sigma")->count() > 0)
            opt.m_sigma = m_sigma;
        try {
            return fn(opt, log);
        } catch (const ConfigError& e) {
            err << e.what() << "\n";
            return exit_config;
        } catch (const GridError& e) {
            err << "error: " << e.what() << "\n";
            return exit_infeasible;
        } catch (const Infeasible& e) {
            err << "infeasible: " << e.what() << "\n";
            return exit_infeasible;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return exit_failure;
        }
    }
    return exit_failure;
}

} // namespace pf::cli
