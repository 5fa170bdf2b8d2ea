#pragma once

namespace pf {

// Centered Gaussian motional state. The x-p covariance magnitude is implied
// by the purity: 4 var_x var_p - hbar^2/P^2 = 4 cov_xp^2.
struct GaussianState {
    double var_x = 0;
    double var_p = 0;
    double purity = 1;
    int cross_sign = 0; // sign of <xp+px>

    // Symmetrized covariance <xp+px>/2.
    double cov_xp() const;
    // Wigner exponent coefficients, W ~ exp(-a1 x^2 - a2 p^2 - a3 x p).
    double a1() const;
    double a2() const;
    double a3() const;

    void validate() const;

    static GaussianState from_covariance(double var_x, double var_p, double cov_xp);
};

GaussianState thermal_state(double mass, double omega0, double nbar);

// Exact free flight for time t with momentum diffusion 2 hbar^2 lambda.
GaussianState free_evolve(const GaussianState& s, double mass, double t, double lambda = 0.0);

} // namespace pf
