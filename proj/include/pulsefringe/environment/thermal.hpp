#pragma once

#include "pulsefringe/environment/blackbody.hpp"

#include <ostream>
#include <vector>

namespace pf {

// Laser on (absorbing p_abs) for tau0, off for tau_f; each run starts with
// the off segment.
struct DutyCycle {
    double p_abs = 0; // W
    double tau0 = 0;
    double tau_f = 0;
};

struct ThermalHistory {
    std::vector<double> time;
    std::vector<double> T_i;
    std::vector<double> cycle_end_T; // T_i at the end of each run
    double T_start = 0;              // T_ss, steady state under continuous absorption
    int runs_to_steady = -1;         // first run with per-run change < tolerance; -1 if not reached
    double T_steady = 0;             // time average over the last run
    double T_min_last = 0;
    double T_max_last = 0;
};

// Solves p_bb(T) = p_bb(T_e) + power_per_volume for T >= T_e.
double steady_temperature(const BlackBodyModel& bb, double T_e, double power_per_volume);

// Internal temperature under continuous absorption (T_ss) and under the
// duty-cycle-averaged absorption.
double steady_state_continuous(const Particle& particle, const BlackBodyModel& bb, double T_e, double p_abs);
double steady_state_duty_averaged(const Particle& particle, const BlackBodyModel& bb, double T_e,
                                  const DutyCycle& duty);

struct ThermalOptions {
    double rtol = 1e-8;
    double steady_tolerance = 1e-3; // K per run
    int samples_per_segment = 8;
    bool stop_at_steady = false;
};

// Integrates m c_m dT/dt = P(t) + V p_bb(T_e) - V p_bb(T) over n_runs cycles
// starting from T_start (T_ss when T_start <= 0).
ThermalHistory internal_temperature_evolution(const Particle& particle, const BlackBodyModel& bb, double T_e,
                                              const DutyCycle& duty, int n_runs, double T_start = 0,
                                              const ThermalOptions& opt = {});

struct DutyCycleOutcome {
    double p_abs = 0;      // W
    double T_ss = 0;       // continuous absorption
    double T_averaged = 0; // algebraic duty-cycle estimate
    double T_inf = 0;      // ODE dynamical steady state
    int runs_to_steady = -1;
};

// Trap absorption at omega0, then the duty-cycle ODE run until the per-run
// change drops below the tolerance (at most max_runs).
DutyCycleOutcome duty_cycle_steady_state(const Particle& particle, const BlackBodyModel& bb, double T_e,
                                         double omega0, double wavelength, double tau0, double tau_f,
                                         int max_runs = 5000);

void write_thermal_csv(std::ostream& out, const ThermalHistory& h);

} // namespace pf
