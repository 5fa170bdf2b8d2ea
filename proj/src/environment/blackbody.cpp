#include "pulsefringe/environment/blackbody.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pf {

double pbb_lowT(double T)
{
    require(T > 0, "pbb_lowT: temperature must be positive");
    double L = std::log(T);
    return std::pow(T, -5.79) * std::exp(3.14 * L * L - 0.265 * L * L * L);
}

double gammabb_lowT(double T)
{
    require(T > 0, "gammabb_lowT: temperature must be positive");
    double L = std::log(T);
    return 1.91e31 * std::pow(T, 8.38) * std::exp(-0.19 * L * L);
}

bool gammabb_lowT_overestimates(double T)
{
    return gammabb_lowT(T) > 1.0;
}

double dipole_pbb(double T, double im_cm)
{
    constexpr double zeta5 = 1.0369277551433699;
    double kt = k_B * T;
    double hb4 = hbar * hbar * hbar * hbar;
    return 72.0 * zeta5 * im_cm * std::pow(kt, 5) / (pi * pi * hb4 * Constants::c * Constants::c * Constants::c);
}

double dipole_gammabb(double T, double im_cm)
{
    double q = k_B * T / (hbar * Constants::c);
    return 4.0 * std::pow(pi, 4) * Constants::c / 63.0 * std::pow(q, 6) * im_cm;
}

BlackBodyModel::BlackBodyModel(std::vector<BlackBodyEntry> table, std::string provenance, bool placeholder)
    : table_(std::move(table)), provenance_(std::move(provenance)), placeholder_(placeholder)
{
    for (std::size_t i = 0; i < table_.size(); ++i) {
        const auto& e = table_[i];
        require(e.T > 0 && e.p_bb >= 0 && e.gamma_bb >= 0, "black-body table: values must be non-negative");
        if (i > 0 && !(e.T > table_[i - 1].T))
            throw InvalidArgument("black-body table must be sorted strictly by temperature");
    }
}

BlackBodyModel BlackBodyModel::from_csv(std::istream& in, const std::string& source)
{
    std::vector<BlackBodyEntry> rows;
    std::string line, provenance;
    bool placeholder = false, header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            if (line.find("placeholder") != std::string::npos)
                placeholder = true;
            if (line.rfind("# provenance:", 0) == 0)
                provenance = line.substr(13);
            continue;
        }
        if (!header) {
            std::string compact;
            for (char c : line)
                if (c != ' ')
                    compact += c;
            if (compact != "T_K,p_bb_W_per_m3,gamma_bb_per_m5s")
                throw InvalidArgument(source + ": expected header T_K,p_bb_W_per_m3,gamma_bb_per_m5s");
            header = true;
            continue;
        }
        std::istringstream ls(line);
        BlackBodyEntry e;
        char c1 = 0, c2 = 0;
        if (!(ls >> e.T >> c1 >> e.p_bb >> c2 >> e.gamma_bb) || c1 != ',' || c2 != ',')
            throw InvalidArgument(source + ":" + std::to_string(lineno) + ": malformed row");
        rows.push_back(e);
    }
    if (rows.empty())
        throw InvalidArgument(source + ": no table rows");
    if (provenance.empty())
        provenance = source;
    return BlackBodyModel(std::move(rows), provenance, placeholder);
}

BlackBodyModel BlackBodyModel::load(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw InvalidArgument("cannot open black-body table " + path);
    return from_csv(f, path);
}

BlackBodyModel BlackBodyModel::thermal_dipole(double im_cm, double T_min, double T_max, int n)
{
    require(n >= 2 && T_min > 0 && T_max > T_min, "thermal_dipole: bad range");
    std::vector<BlackBodyEntry> rows;
    for (int i = 0; i < n; ++i) {
        double T = T_min * std::pow(T_max / T_min, static_cast<double>(i) / (n - 1));
        rows.push_back({T, dipole_pbb(T, im_cm), dipole_gammabb(T, im_cm)});
    }
    std::ostringstream p;
    p << "placeholder thermal-dipole model, Im[(eps-1)/(eps+2)] = " << im_cm;
    return BlackBodyModel(std::move(rows), p.str(), true);
}

double BlackBodyModel::table_min() const
{
    return table_.empty() ? 0.0 : table_.front().T;
}

double BlackBodyModel::table_max() const
{
    return table_.empty() ? 0.0 : table_.back().T;
}

bool BlackBodyModel::covers(double T) const
{
    if (!(T > 0))
        return false;
    if (!table_.empty() && T >= table_min() && T <= table_max())
        return true;
    return use_low_T_extrapolation && (T < 100.0 || low_T_override);
}

double BlackBodyModel::interpolate(double T, bool gamma) const
{
    auto it = std::lower_bound(table_.begin(), table_.end(), T,
                               [](const BlackBodyEntry& e, double t) { return e.T < t; });
    auto val = [gamma](const BlackBodyEntry& e) { return gamma ? e.gamma_bb : e.p_bb; };
    if (it != table_.end() && it->T == T)
        return val(*it);
    auto hi = it;
    auto lo = it - 1;
    double y0 = val(*lo), y1 = val(*hi);
    double w = std::log(T / lo->T) / std::log(hi->T / lo->T);
    if (y0 > 0 && y1 > 0)
        return std::exp(std::log(y0) + w * std::log(y1 / y0));
    double wl = (T - lo->T) / (hi->T - lo->T);
    return y0 + wl * (y1 - y0);
}

double BlackBodyModel::p_bb(double T) const
{
    if (!table_.empty() && T >= table_min() && T <= table_max())
        return interpolate(T, false);
    if (covers(T))
        return pbb_lowT(T);
    std::ostringstream s;
    s << "black-body model does not cover T = " << T << " K";
    if (!table_.empty())
        s << " (table spans " << table_min() << " to " << table_max() << " K)";
    else
        s << " (no table supplied)";
    throw TableRangeError(s.str());
}

double BlackBodyModel::gamma_bb(double T) const
{
    if (!table_.empty() && T >= table_min() && T <= table_max())
        return interpolate(T, true);
    if (covers(T))
        return gammabb_lowT(T);
    std::ostringstream s;
    s << "black-body model does not cover T = " << T << " K";
    if (!table_.empty())
        s << " (table spans " << table_min() << " to " << table_max() << " K)";
    else
        s << " (no table supplied)";
    throw TableRangeError(s.str());
}

void BlackBodyModel::write_csv(std::ostream& out) const
{
    out << "# provenance: " << provenance_ << "\n";
    out << "# units: T [K], p_bb [W/m^3], gamma_bb [1/(m^2 s m^3)]\n";
    out << "T_K,p_bb_W_per_m3,gamma_bb_per_m5s\n";
    out << std::setprecision(10);
    for (auto& e : table_)
        out << e.T << "," << e.p_bb << "," << e.gamma_bb << "\n";
}

double absorbed_power(const Particle& particle, double omega0, double wavelength)
{
    require(omega0 > 0, "absorbed_power: omega0 must be positive");
    double k = 2.0 * pi / wavelength;
    return particle.mass * omega0 * omega0 * Constants::c * particle.beta_abs / k;
}

double bb_localization_rate(const Particle& particle, const BlackBodyModel& bb, double T_i, double T_e)
{
    return particle.volume * bb.gamma_bb(T_i) + particle.volume * bb.gamma_bb(T_e);
}

} // namespace pf
