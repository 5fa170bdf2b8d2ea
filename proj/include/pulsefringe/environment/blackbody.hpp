#pragma once

#include "pulsefringe/core/particle.hpp"

#include <istream>
#include <string>
#include <vector>

namespace pf {

// Low-temperature fits, in the units of the plotted data (taken as W/m^3 and
// 1/(m^2 s m^3)). Valid below 100 K.
double pbb_lowT(double T);
double gammabb_lowT(double T);
// True where the gamma fit exceeds 1, i.e. where it likely overestimates.
bool gammabb_lowT_overestimates(double T);

struct BlackBodyEntry {
    double T = 0;        // K
    double p_bb = 0;     // W/m^3
    double gamma_bb = 0; // 1/(m^2 s m^3)
};

class BlackBodyModel {
public:
    BlackBodyModel() = default;
    BlackBodyModel(std::vector<BlackBodyEntry> table, std::string provenance, bool placeholder);

    // CSV with header T_K,p_bb_W_per_m3,gamma_bb_per_m5s; '#' lines are
    // comments. A comment containing "placeholder" marks the table as such.
    static BlackBodyModel from_csv(std::istream& in, const std::string& source);
    static BlackBodyModel load(const std::string& path);
    // Thermal point-dipole model with a temperature-independent
    // Im[(eps-1)/(eps+2)]. Used only to build illustrative tables.
    static BlackBodyModel thermal_dipole(double im_cm, double T_min, double T_max, int n);

    bool has_table() const { return !table_.empty(); }
    bool placeholder() const { return placeholder_; }
    const std::string& provenance() const { return provenance_; }
    const std::vector<BlackBodyEntry>& table() const { return table_; }

    bool use_low_T_extrapolation = true;
    // Allows the low-T fits above 100 K when no table covers T.
    bool low_T_override = false;

    bool covers(double T) const;
    // Throws TableRangeError naming T when no source covers it.
    double p_bb(double T) const;
    double gamma_bb(double T) const;
    double table_min() const;
    double table_max() const;

    void write_csv(std::ostream& out) const;

private:
    double interpolate(double T, bool gamma) const;

    std::vector<BlackBodyEntry> table_;
    std::string provenance_;
    bool placeholder_ = false;
};

// Thermal point-dipole emission per volume and emission localization rate
// per volume for constant Im[(eps-1)/(eps+2)].
double dipole_pbb(double T, double im_cm);
double dipole_gammabb(double T, double im_cm);

double absorbed_power(const Particle& particle, double omega0, double wavelength);

double bb_localization_rate(const Particle& particle, const BlackBodyModel& bb, double T_i, double T_e);

} // namespace pf
