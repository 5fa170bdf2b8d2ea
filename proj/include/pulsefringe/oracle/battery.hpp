#pragma once

#include "pulsefringe/analytic/protocol.hpp"
#include "pulsefringe/core/particle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pf {

struct BatteryCheck {
    std::string name;
    double value = 0;
    double tolerance = 0;
    bool passed = false;
};

struct BatteryOptions {
    int protocols = 10;
    std::uint64_t seed = 20240611;
    double radius = 50e-9;
    double delta_x_scale = 1.0;  // debug: stretches the analytic fringe spacing
    std::size_t max_points = std::size_t(1) << 22;
    unsigned workers = 0;
};

struct BatteryReport {
    std::vector<BatteryCheck> checks;
    bool passed() const;
};

// Modest protocols: pure state, tau2 in [0.1, 1] us, omega4 tau4 in [0.3, 1.5],
// omega_p from the exact mapping condition (sigma_bc/delta_x < 0.3 enforced).
std::vector<ProtocolParams> random_oracle_protocols(int count, std::uint64_t seed, const Particle& particle,
                                                    double wavelength = 1550e-9);

struct OracleComparison {
    double l1 = 0;
    double sigma_bc_over_dx = 0;
    std::size_t points = 0;
    double leakage = 0;
};

// Split-step density against the unitary analytic density of the exact map.
OracleComparison compare_with_analytic(const ProtocolParams& params, const Particle& particle,
                                       double delta_x_scale = 1.0, std::size_t max_points = std::size_t(1) << 22);

// Throws GridError when a grid would exceed max_points.
BatteryReport run_oracle_battery(const BatteryOptions& opt = {});

} // namespace pf
