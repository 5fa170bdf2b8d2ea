#pragma once

#include "pulsefringe/core/gaussian_state.hpp"

#include <string>
#include <vector>

namespace pf {

struct ProtocolParams {
    double omega0 = 0;   // trap frequency, step 0
    double nbar = 0;
    double tau0 = 0;     // cooling time, thermal duty cycle only
    double tau1 = 0;
    double phi2 = 0;     // standing-wave phase of the pulse
    double omega_p = 0;  // pulse intensity scale
    double tau2 = 0;
    double tau3 = 0;
    double omega4 = 0;   // inverted-potential rate
    double tau4 = 0;
    double sigma5 = 0;   // detector blur, m

    // Throws InvalidArgument on hard violations.
    void validate() const;
    // Regime checks the closed forms rely on.
    std::vector<std::string> warnings() const;
};

// omega_p that produces the requested harmonic stiffness omega2 at phase phi2.
double omega_p_for_omega2(double omega2, double phi2);

struct CubicPulse {
    double omega2_sq = 0; // cos(2 phi2) omega_p^2
    double inv_l = 0;     // (k/3) tan(2 phi2)
    double k = 0;         // 2 pi / lambda

    double u2(double mass) const { return mass * omega2_sq / 2.0; }
    double u3(double mass) const { return mass * omega2_sq * inv_l; }
};

CubicPulse make_pulse(double omega_p, double phi2, double wavelength);

struct FringePattern {
    double delta_x = 0;
    double sigma_c = 0;
    double sigma_lambda = 0;
    double p_c = 0;
    double p_lambda = 0;

    static FringePattern make(double delta_x, double sigma_c, double sigma_lambda);
    FringePattern with_sigma_lambda(double s) const { return make(delta_x, sigma_c, s); }
    // Dimensionless pattern with delta_x = 1.
    static FringePattern canonical(double p_c, double p_lambda) { return make(1.0, p_c, p_lambda); }
};

double sigma_x_after_free_fall(const GaussianState& state, double mass, double tau1, double lambda1 = 0.0);

struct MappingCondition {
    double exact = 0; // chirp of the step-1 state plus the exact step-3/4 transfer term
    double limit = 0; // 1/tau1 + 1/tau3
};

// Value of omega2^2 tau2 that removes the residual quadratic phase.
MappingCondition mapping_condition_omega2sq_tau2(double tau1, double tau3, double omega4, double tau4,
                                                 const GaussianState& state_after_step1, double mass);

// Transfer-matrix element B (final position per initial momentum, s/kg) of
// free flight tau3 followed by the inverted potential for tau4.
double position_map_coefficient(double mass, double tau3, double omega4, double tau4);
// A/B of the same map times mass, in 1/s.
double transfer_focus_rate(double tau3, double omega4, double tau4);

// [3 m omega2^2 tau2 / (hbar l)]^{1/3}, in 1/m.
double cubic_strength(double mass, const CubicPulse& pulse, double tau2);

double fringe_ratio(double sigma_x1, double mass, const CubicPulse& pulse, double tau2);

double sigma_c_with_inversion(double sigma_x1, double mass, double tau3, double omega4, double tau4);

// Large omega4 tau4 closed form: delta_x and sigma_c carry e^{omega4 tau4}.
FringePattern pattern_with_inversion(double sigma_x1, double mass, const CubicPulse& pulse, double tau2,
                                     double tau3, double omega4, double tau4, double sigma_lambda);

FringePattern pattern_no_inversion(double sigma_x1, double mass, const CubicPulse& pulse, double tau2,
                                   double tau3, double sigma2, double sigma01);

// Exact linear-map version for any omega4 tau4, used against the grid oracle.
FringePattern pattern_from_map(double sigma_x1, double mass, const CubicPulse& pulse, double tau2,
                               double map_b, double sigma_lambda);

struct BcResidual {
    double b_c = 0;              // 1/m^2
    double sigma_bc_over_dx = 0;
    bool valid = true;           // sigma_bc/dx < 1
};

enum class MappingForm { exact, limit };

BcResidual b_c_residual(const ProtocolParams& params, const GaussianState& state_after_step1,
                        const CubicPulse& pulse, double mass, MappingForm form = MappingForm::exact);

} // namespace pf
