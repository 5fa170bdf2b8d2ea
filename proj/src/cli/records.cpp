#include "pulsefringe/cli/records.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pf::cli {

namespace {

// JSON has no infinity; unbounded values become null
json num(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

} // namespace

json to_json(const ProtocolParams& p)
{
    return {{"omega0_rad_s", p.omega0}, {"nbar", p.nbar},         {"tau0_s", p.tau0},
            {"tau1_s", p.tau1},         {"phi2_rad", p.phi2},     {"omega_p_rad_s", p.omega_p},
            {"tau2_s", p.tau2},         {"tau3_s", p.tau3},       {"omega4_rad_s", p.omega4},
            {"tau4_s", p.tau4},         {"sigma5_m", p.sigma5}};
}

json to_json(const FringePattern& f)
{
    return {{"delta_x_m", f.delta_x},
            {"sigma_c_m", f.sigma_c},
            {"sigma_lambda_m", f.sigma_lambda},
            {"p_c", f.p_c},
            {"p_lambda", f.p_lambda}};
}

json to_json(const BlurringBudget& b)
{
    return {{"sigma01_kg_m_s", b.sigma01}, {"sigma2_kg_m_s", b.sigma2}, {"sigma3_m", b.sigma3},
            {"sigma4_m", b.sigma4},        {"sigma5_m", b.sigma5},      {"sigma_lambda_m", b.sigma_lambda}};
}

json to_json(const PatternMetrics& m)
{
    return {{"visibility", m.visibility},
            {"p_r", m.p_r},
            {"quality", m.quality},
            {"n_runs", num(m.n_runs)},
            {"fringes", m.fringes}};
}

json to_json(const CoherenceReport& c)
{
    return {{"x_c_m", num(c.x_c)}, {"x_c_star_m", num(c.x_c_star)}, {"g1_peaks", c.g1_peaks}};
}

json to_json(const Extrema& e)
{
    return {{"x_max1_m", e.x_max1}, {"x_max2_m", e.x_max2}, {"x_min1_m", e.x_min1}, {"x_min2_m", e.x_min2}};
}

json to_json(const OptimizationResult& r)
{
    json j = {{"feasible", r.feasible},
              {"reason", r.reason},
              {"tau1_s", r.tau1},
              {"tau3_s", r.tau3},
              {"phi2_rad", r.phi2},
              {"tau4_s", r.tau4},
              {"omega_p_rad_s", r.omega_p},
              {"omega2_rad_s", r.omega2},
              {"objective_m", r.objective},
              {"pattern", to_json(r.pattern)},
              {"metrics", to_json(r.metrics)},
              {"g1", r.g1},
              {"sigma_bc_over_dx", r.sigma_bc_over_dx},
              {"T_i_K", r.T_i},
              {"lambda_bb_per_m2_s", r.lambda_bb},
              {"candidates", r.candidates}};
    return j;
}

std::string utc_timestamp()
{
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

json record_header(const std::string& command, const ScenarioConfig& cfg)
{
    json inputs = json::object();
    for (auto& [k, v] : cfg.raw.values())
        inputs[k] = v;
    return {{"tool", "pulsefringe"},
            {"version", PULSEFRINGE_VERSION},
            {"command", command},
            {"timestamp", utc_timestamp()},
            {"inputs", inputs}};
}

void write_json(const std::string& path, const json& j)
{
    std::ofstream f(path);
    if (!f)
        throw InvalidArgument("cannot write " + path);
    f << j.dump(2) << "\n";
}

void write_columns_csv(std::ostream& out, const std::vector<std::string>& comments,
                       const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns)
{
    require(names.size() == columns.size() && !columns.empty(), "write_columns_csv: column mismatch");
    out << "# pulsefringe " << PULSEFRINGE_VERSION << "\n";
    for (auto& c : comments)
        out << "# " << c << "\n";
    for (std::size_t i = 0; i < names.size(); ++i)
        out << (i ? "," : "") << names[i];
    out << "\n" << std::setprecision(12);
    for (std::size_t r = 0; r < columns[0].size(); ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << columns[i][r];
        out << "\n";
    }
}

} // namespace pf::cli
