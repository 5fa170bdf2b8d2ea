#include "pulsefringe/environment/gas.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"

#include <cmath>

namespace pf {

void GasModel::validate() const
{
    require(gas_mass > 0, "gas mass must be positive");
    require(temperature > 0, "gas temperature must be positive");
    require(pressure > 0, "gas pressure must be positive");
}

double mean_gas_speed(const GasModel& gas)
{
    return std::sqrt(8.0 * k_B * gas.temperature / (pi * gas.gas_mass));
}

double gas_collision_rate(const GasModel& gas, double radius)
{
    gas.validate();
    require(radius > 0, "radius must be positive");
    return 8.0 * pi * gas.pressure * radius * radius / (gas.gas_mass * mean_gas_speed(gas));
}

double no_collision_probability(const GasModel& gas, double radius, double tau_f, bool axis_only)
{
    require(tau_f >= 0, "tau_f must be non-negative");
    double g = gas_collision_rate(gas, radius);
    if (axis_only)
        g /= 3.0;
    return std::exp(-g * tau_f);
}

double pressure_for_quantile(const GasModel& gas_template, double radius, double tau_f, double quantile)
{
    require(quantile > 0 && quantile < 1, "quantile must lie in (0, 1)");
    require(tau_f > 0 && radius > 0, "tau_f and radius must be positive");
    require(gas_template.gas_mass > 0 && gas_template.temperature > 0, "invalid gas template");
    double rate_needed = -3.0 * std::log(quantile) / tau_f;
    return rate_needed * gas_template.gas_mass * mean_gas_speed(gas_template) / (8.0 * pi * radius * radius);
}

} // namespace pf
