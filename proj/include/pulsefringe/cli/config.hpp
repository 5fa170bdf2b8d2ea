#pragma once

#include "pulsefringe/analytic/protocol.hpp"
#include "pulsefringe/core/errors.hpp"
#include "pulsefringe/core/keyvalue.hpp"
#include "pulsefringe/core/particle.hpp"
#include "pulsefringe/optimizer/pipeline.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pf::cli {

struct ConfigError : Error {
    explicit ConfigError(std::vector<std::string> problems);
    std::vector<std::string> problems;
};

enum class PulseInput { omega2, omega_p, mapping };

// Frequencies are entered as omega/2pi.
struct ScenarioConfig {
    double radius = 50e-9;
    Material material = Material::silica();
    double wavelength = 1550e-9;

    ProtocolParams params;
    PulseInput pulse_input = PulseInput::omega2;
    double omega2 = 0;            // used when pulse_input == omega2
    Geometry geometry = Geometry::inverted;
    MappingForm mapping = MappingForm::exact;

    double T_e = 300;
    double pressure = 1e-8;       // Pa
    double gas_mass = 0;
    double T_gas = 300;
    std::string bb_table;         // resolved path, empty when not given
    double m_sigma = 5.0;

    double tau_f = 2.1e-3;
    double q_target = 0.005;
    double fringe_target = 5e-9;
    double g1_min = 0.95;
    int n_tau1 = 40;
    int n_phi2 = 64;

    std::vector<double> sweep_radius;
    std::vector<double> sweep_T_e;
    std::vector<double> sweep_tau_f;
    bool has_sweep = false;

    int thermal_runs = 400;
    double quantile = 0.9;

    int oracle_protocols = 10;
    std::uint64_t oracle_seed = 20240611;

    KeyValue raw;
};

// Validates every key; throws ConfigError listing all problems at once.
// Relative file paths resolve against base_dir.
ScenarioConfig parse_config(const KeyValue& kv, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

// Key names with units and defaults, one line each.
std::vector<std::string> config_schema();

} // namespace pf::cli
