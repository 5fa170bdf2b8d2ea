#include "pulsefringe/cli/config.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/environment/gas.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

namespace pf::cli {

namespace {

std::string join(const std::vector<std::string>& v)
{
    std::string s = "invalid configuration:";
    for (auto& p : v)
        s += "\n  " + p;
    return s;
}

enum class Kind { number, integer, list, text };

struct KeySpec {
    const char* key;
    Kind kind;
    const char* help;
};

const std::vector<KeySpec>& schema()
{
    static const std::vector<KeySpec> s = {
        {"radius_nm", Kind::number, "particle radius [nm], default 50"},
        {"material_file", Kind::text, "key/value material file (density, specific_heat, refractive_index_re/_im)"},
        {"density_kg_m3", Kind::number, "material density [kg/m^3], default 1850"},
        {"specific_heat_j_kg_k", Kind::number, "specific heat [J/(kg K)], default 700"},
        {"refractive_index_re", Kind::number, "real refractive index at the trap wavelength, default 1.43"},
        {"refractive_index_im", Kind::number, "imaginary refractive index, default 2.46e-9"},
        {"wavelength_nm", Kind::number, "trap and pulse wavelength [nm], default 1550"},
        {"omega0_khz", Kind::number, "trap frequency omega0/2pi [kHz], default 100"},
        {"nbar", Kind::number, "initial thermal occupation, default 0.5"},
        {"tau0_ms", Kind::number, "cooling time per run [ms], default 2"},
        {"tau1_ms", Kind::number, "first free flight [ms], default 1.34"},
        {"phi2_pi", Kind::number, "pulse standing-wave phase in units of pi, default 0.05"},
        {"omega2_khz", Kind::number, "pulse stiffness omega2/2pi [kHz]; default 2.5"},
        {"omega_p_khz", Kind::number, "pulse intensity scale omega_p/2pi [kHz]; overrides omega2_khz"},
        {"pulse_from_mapping", Kind::text, "true: omega2 from the mapping condition; default false"},
        {"tau2_us", Kind::number, "pulse duration [us], default 10"},
        {"tau3_ms", Kind::number, "second free flight [ms], default 0.66"},
        {"omega4_khz", Kind::number, "inverted-potential rate omega4/2pi [kHz], default 10"},
        {"tau4_ms", Kind::number, "inverted-potential duration [ms], default 0.087"},
        {"sigma5_nm", Kind::number, "detector blur [nm], default 0"},
        {"geometry", Kind::text, "inverted | splitting, default inverted"},
        {"mapping", Kind::text, "exact | limit, default exact"},
        {"T_e_k", Kind::number, "environment temperature [K], default 300"},
        {"pressure_mbar", Kind::number, "gas pressure [mbar], default 1e-10"},
        {"gas_mass_amu", Kind::number, "gas molecule mass [amu], default 2.016 (H2)"},
        {"T_gas_k", Kind::number, "gas temperature [K], default T_e_k"},
        {"bb_table", Kind::text, "black-body table CSV (T_K,p_bb_W_per_m3,gamma_bb_per_m5s)"},
        {"m_sigma", Kind::number, "detection confidence in standard deviations, default 5"},
        {"tau_f_ms", Kind::number, "free time per run tau1 + tau3 [ms], default 2.1"},
        {"q_target", Kind::number, "pattern quality target v^2 p_r, default 0.005"},
        {"fringe_target_nm", Kind::number, "target 1.75 delta_x [nm], default 5"},
        {"g1_min", Kind::number, "splitting search: minimum g1 between the largest peaks, default 0.95"},
        {"n_tau1", Kind::integer, "optimizer tau1 grid size, default 40"},
        {"n_phi2", Kind::integer, "optimizer phi2 grid size, default 64"},
        {"sweep_radius_nm", Kind::list, "comma-separated radii [nm]"},
        {"sweep_T_e_k", Kind::list, "comma-separated environment temperatures [K]"},
        {"sweep_tau_f_ms", Kind::list, "comma-separated free times [ms]"},
        {"thermal_runs", Kind::integer, "duty cycles to integrate, default 400"},
        {"quantile", Kind::number, "no-collision probability for the pressure requirement, default 0.9"},
        {"oracle_protocols", Kind::integer, "randomized oracle protocols, default 10"},
        {"oracle_seed", Kind::integer, "oracle protocol seed, default 20240611"},
    };
    return s;
}

bool parse_number(const std::string& s, double& out)
{
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> p) : Error(join(p)), problems(std::move(p)) {}

std::vector<std::string> config_schema()
{
    std::vector<std::string> out;
    for (auto& k : schema())
        out.push_back(std::string(k.key) + ": " + k.help);
    return out;
}

ScenarioConfig parse_config(const KeyValue& kv, const std::string& base_dir)
{
    std::vector<std::string> problems;
    std::map<std::string, Kind> kinds;
    for (auto& k : schema())
        kinds[k.key] = k.kind;

    std::map<std::string, double> num;
    std::map<std::string, std::vector<double>> lists;
    for (auto& [key, value] : kv.values()) {
        auto it = kinds.find(key);
        if (it == kinds.end()) {
            problems.push_back("unknown key '" + key + "'");
            continue;
        }
        if (it->second == Kind::number || it->second == Kind::integer) {
            double v = 0;
            if (!parse_number(value, v))
                problems.push_back(key + ": not a finite number: '" + value + "'");
            else if (it->second == Kind::integer && v != std::floor(v))
                problems.push_back(key + ": expected an integer: '" + value + "'");
            else
                num[key] = v;
        } else if (it->second == Kind::list) {
            std::vector<double> vals;
            std::stringstream ss(value);
            std::string item;
            bool ok = true;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                double v = 0;
                if (item.empty() && value.find_first_not_of(" \t,") == std::string::npos)
                    continue;
                if (!parse_number(item, v)) {
                    problems.push_back(key + ": not a finite number in list: '" + item + "'");
                    ok = false;
                    break;
                }
                vals.push_back(v);
            }
            if (ok)
                lists[key] = vals;
        }
    }

    ScenarioConfig c;
    c.raw = kv;
    auto get = [&](const char* key, double fallback) {
        auto it = num.find(key);
        return it == num.end() ? fallback : it->second;
    };
    auto positive = [&](const char* key, double v) {
        if (!(v > 0))
            problems.push_back(std::string(key) + ": must be positive");
    };
    auto nonneg = [&](const char* key, double v) {
        if (!(v >= 0))
            problems.push_back(std::string(key) + ": must be non-negative");
    };
    auto path_of = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (std::filesystem::path(base_dir) / fp).string();
    };

    if (auto f = kv.get("material_file")) {
        try {
            c.material = load_material(path_of(*f));
        } catch (const Error& e) {
            problems.push_back(std::string("material_file: ") + e.what());
        }
    }
    c.material.density = get("density_kg_m3", c.material.density);
    c.material.specific_heat = get("specific_heat_j_kg_k", c.material.specific_heat);
    c.material.refractive_index_re = get("refractive_index_re", c.material.refractive_index_re);
    c.material.refractive_index_im = get("refractive_index_im", c.material.refractive_index_im);
    c.wavelength = get("wavelength_nm", 1550) * 1e-9;
    c.material.wavelength = c.wavelength;
    positive("density_kg_m3", c.material.density);
    positive("specific_heat_j_kg_k", c.material.specific_heat);
    positive("refractive_index_re", c.material.refractive_index_re);
    nonneg("refractive_index_im", c.material.refractive_index_im);
    positive("wavelength_nm", c.wavelength);

    c.radius = get("radius_nm", 50) * 1e-9;
    positive("radius_nm", c.radius);

    auto& p = c.params;
    p.omega0 = 2.0 * pi * get("omega0_khz", 100) * 1e3;
    p.nbar = get("nbar", 0.5);
    p.tau0 = get("tau0_ms", 2) * 1e-3;
    p.tau1 = get("tau1_ms", 1.34) * 1e-3;
    p.phi2 = get("phi2_pi", 0.05) * pi;
    p.tau2 = get("tau2_us", 10) * 1e-6;
    p.tau3 = get("tau3_ms", 0.66) * 1e-3;
    p.omega4 = 2.0 * pi * get("omega4_khz", 10) * 1e3;
    p.tau4 = get("tau4_ms", 0.087) * 1e-3;
    p.sigma5 = get("sigma5_nm", 0) * 1e-9;
    positive("omega0_khz", p.omega0);
    nonneg("nbar", p.nbar);
    nonneg("tau0_ms", p.tau0);
    positive("tau1_ms", p.tau1);
    if (!(p.phi2 > 0 && p.phi2 < pi / 4))
        problems.push_back("phi2_pi: must lie in (0, 0.25)");
    positive("tau2_us", p.tau2);
    positive("tau3_ms", p.tau3);
    nonneg("omega4_khz", p.omega4);
    nonneg("tau4_ms", p.tau4);
    nonneg("sigma5_nm", p.sigma5);

    const std::string from_map = kv.get("pulse_from_mapping").value_or("false");
    if (from_map != "true" && from_map != "false")
        problems.push_back("pulse_from_mapping: expected true or false");
    if (from_map == "true") {
        c.pulse_input = PulseInput::mapping;
        if (num.count("omega2_khz") || num.count("omega_p_khz"))
            problems.push_back("pulse_from_mapping = true conflicts with omega2_khz / omega_p_khz");
    } else if (num.count("omega_p_khz")) {
        c.pulse_input = PulseInput::omega_p;
        p.omega_p = 2.0 * pi * num["omega_p_khz"] * 1e3;
        positive("omega_p_khz", p.omega_p);
        if (num.count("omega2_khz"))
            problems.push_back("give only one of omega2_khz and omega_p_khz");
    } else {
        c.pulse_input = PulseInput::omega2;
        c.omega2 = 2.0 * pi * get("omega2_khz", 2.5) * 1e3;
        positive("omega2_khz", c.omega2);
        if (c.omega2 > 0 && p.phi2 > 0 && p.phi2 < pi / 4)
            p.omega_p = omega_p_for_omega2(c.omega2, p.phi2);
    }

    const std::string geo = kv.get("geometry").value_or("inverted");
    if (geo == "inverted")
        c.geometry = Geometry::inverted;
    else if (geo == "splitting")
        c.geometry = Geometry::splitting;
    else
        problems.push_back("geometry: expected inverted or splitting, got '" + geo + "'");
    const std::string map = kv.get("mapping").value_or("exact");
    if (map == "exact")
        c.mapping = MappingForm::exact;
    else if (map == "limit")
        c.mapping = MappingForm::limit;
    else
        problems.push_back("mapping: expected exact or limit, got '" + map + "'");

    c.T_e = get("T_e_k", 300);
    positive("T_e_k", c.T_e);
    c.pressure = get("pressure_mbar", 1e-10) * pa_per_mbar;
    nonneg("pressure_mbar", c.pressure);
    c.gas_mass = get("gas_mass_amu", 2.016) * Constants::amu;
    positive("gas_mass_amu", c.gas_mass);
    c.T_gas = get("T_gas_k", c.T_e);
    positive("T_gas_k", c.T_gas);
    if (auto b = kv.get("bb_table"); b && !b->empty())
        c.bb_table = path_of(*b);
    c.m_sigma = get("m_sigma", 5);
    positive("m_sigma", c.m_sigma);

    c.tau_f = get("tau_f_ms", 2.1) * 1e-3;
    positive("tau_f_ms", c.tau_f);
    c.q_target = get("q_target", 0.005);
    if (!(c.q_target > 0 && c.q_target < 1))
        problems.push_back("q_target: must lie in (0, 1)");
    c.fringe_target = get("fringe_target_nm", 5) * 1e-9;
    positive("fringe_target_nm", c.fringe_target);
    c.g1_min = get("g1_min", 0.95);
    if (!(c.g1_min >= 0 && c.g1_min <= 1))
        problems.push_back("g1_min: must lie in [0, 1]");
    c.n_tau1 = static_cast<int>(get("n_tau1", 40));
    c.n_phi2 = static_cast<int>(get("n_phi2", 64));
    if (c.n_tau1 < 4)
        problems.push_back("n_tau1: must be at least 4");
    if (c.n_phi2 < 4)
        problems.push_back("n_phi2: must be at least 4");

    auto list = [&](const char* key, double scale, std::vector<double>& out) {
        if (auto it = lists.find(key); it != lists.end()) {
            c.has_sweep = true;
            for (double v : it->second) {
                if (!(v > 0))
                    problems.push_back(std::string(key) + ": values must be positive");
                out.push_back(v * scale);
            }
        }
    };
    list("sweep_radius_nm", 1e-9, c.sweep_radius);
    list("sweep_T_e_k", 1.0, c.sweep_T_e);
    list("sweep_tau_f_ms", 1e-3, c.sweep_tau_f);

    c.thermal_runs = static_cast<int>(get("thermal_runs", 400));
    if (c.thermal_runs < 1)
        problems.push_back("thermal_runs: must be at least 1");
    c.quantile = get("quantile", 0.9);
    if (!(c.quantile > 0 && c.quantile < 1))
        problems.push_back("quantile: must lie in (0, 1)");
    c.oracle_protocols = static_cast<int>(get("oracle_protocols", 10));
    if (c.oracle_protocols < 0)
        problems.push_back("oracle_protocols: must be non-negative");
    const double seed = get("oracle_seed", 20240611);
    if (!(seed >= 0))
        problems.push_back("oracle_seed: must be non-negative");
    c.oracle_seed = static_cast<std::uint64_t>(seed);

    if (!problems.empty())
        throw ConfigError(problems);
    return c;
}

ScenarioConfig load_config(const std::string& path)
{
    KeyValue kv;
    try {
        kv = KeyValue::load(path);
    } catch (const InvalidArgument& e) {
        throw ConfigError({e.what()});
    }
    auto dir = std::filesystem::path(path).parent_path();
    return parse_config(kv, dir.empty() ? "." : dir.string());
}

} // namespace pf::cli
