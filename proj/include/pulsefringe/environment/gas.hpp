#pragma once

namespace pf {

struct GasModel {
    double gas_mass = 2.0 * 1.66053906660e-27; // H2
    double temperature = 300.0;               // K
    double pressure = 0;                      // Pa

    void validate() const;
};

double mean_gas_speed(const GasModel& gas);

double gas_collision_rate(const GasModel& gas, double radius);

// Probability of a run free of collisions; axis_only counts only the third
// of collisions that transfer momentum along x.
double no_collision_probability(const GasModel& gas, double radius, double tau_f, bool axis_only);

// Pressure (Pa) at which the axis-only no-collision probability equals quantile.
double pressure_for_quantile(const GasModel& gas_template, double radius, double tau_f, double quantile);

inline constexpr double pa_per_mbar = 100.0;

} // namespace pf
