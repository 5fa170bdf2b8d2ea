#pragma once

#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/environment/blackbody.hpp"
#include "pulsefringe/optimizer/contour.hpp"
#include "pulsefringe/optimizer/pipeline.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pf {

struct OptimizerConfig {
    double radius = 50e-9;
    Material material = Material::silica();
    double wavelength = 1550e-9;
    double T_e = 300.0;
    double tau_f = 2.1e-3;        // tau1 + tau3
    double q_target = 0.005;
    double fringe_target = 5e-9;  // 1.75 delta_x, coherence-length search only
    double g1_min = 0.95;         // splitting search only
    double omega0 = 2.0 * pi * 100e3;
    double omega4 = 2.0 * pi * 10e3;
    double tau2 = 10e-6;
    double tau0 = 2e-3;
    double nbar = 0.5;
    double m_sigma = 5.0;
    MappingForm mapping = MappingForm::exact;
    int n_tau1 = 40;
    int n_phi2 = 64;
    unsigned workers = 0;
    const BlackBodyModel* bb = nullptr;          // null: black body excluded
    std::shared_ptr<const ContourFunction> contour; // built on demand when null
};

struct OptimizationResult {
    bool feasible = false;
    std::string reason;
    double tau1 = 0;
    double tau3 = 0;
    double phi2 = 0;
    double tau4 = 0;
    double omega_p = 0;
    double omega2 = 0;
    double objective = 0; // x_c* (m) or 2.23 delta_x (m)
    FringePattern pattern;
    PatternMetrics metrics;
    double g1 = 0;
    double sigma_bc_over_dx = 0;
    double T_i = 0;       // internal temperature used for the black-body rate
    double lambda_bb = 0;
    int candidates = 0;   // contour crossings found on the coarse grid
    std::vector<std::string> conditional_flags;
    Scenario scenario;    // re-evaluate with evaluate_protocol
};

std::shared_ptr<const ContourFunction> default_contour(double q_target, unsigned workers = 0);

OptimizationResult optimize_coherence_length(const OptimizerConfig& cfg);
OptimizationResult optimize_splitting(const OptimizerConfig& cfg);

// Objective of a scenario: x_c* for the inverted geometry, 2.23 delta_x for splitting.
double objective_of(const Scenario& s, const Evaluation& e);

} // namespace pf
