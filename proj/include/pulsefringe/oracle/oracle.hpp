#pragma once

#include "pulsefringe/analytic/protocol.hpp"
#include "pulsefringe/core/gaussian_state.hpp"
#include "pulsefringe/core/particle.hpp"

#include <complex>
#include <cstddef>
#include <ostream>
#include <vector>

namespace pf {

struct Grid1D {
    double x_min = 0;
    double x_max = 0;   // exclusive: periodic grid of n points
    std::size_t n = 0;  // power of two, >= 1024

    double dx() const { return (x_max - x_min) / static_cast<double>(n); }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    std::vector<double> points() const;
    void validate() const;

    static Grid1D make(double x_min, double x_max, std::size_t min_points);
};

enum class PotentialMode { polynomial, standing_wave };

struct WavefunctionFrame {
    Grid1D grid;
    std::vector<std::complex<double>> psi;
    double time = 0;
    int step = 0;

    double norm() const;
    std::vector<double> density() const;
};

struct OracleOptions {
    double wavelength = 1550e-9;
    double step0_time = 0;          // time spent in the trap before step 1
    int last_step = 4;              // stop after this step
    double omega_dt = 1e-3;         // omega * dt for potential segments
    double short_pulse_ratio = 1e-3;
    bool force_full_pulse = false;
    double guard_fraction = 0.05;
    double max_leakage = 1e-6;
    double max_boundary = 1e-8;
    std::size_t max_points = std::size_t(1) << 22;
};

struct OracleRun {
    std::vector<WavefunctionFrame> frames; // initial state, then one frame per completed step
    double leakage = 0;                    // probability removed by the guard band
    double max_norm_drift = 0;             // per unitary segment, before masking
    bool pulse_as_phase = true;
};

// Grid covering the classical phase-space envelope of the pure ground state
// through the requested steps, fine enough for the largest momentum and the
// final fringe scale. Throws GridError above max_points.
Grid1D oracle_grid(const ProtocolParams& params, const Particle& particle, PotentialMode mode,
                   const OracleOptions& opt = {});

// Split-operator propagation of the pure trap ground state. Throws GridError
// ("grid insufficient") on leakage or boundary breaches.
OracleRun propagate_protocol_run(const ProtocolParams& params, const Particle& particle, const Grid1D& grid,
                                 PotentialMode mode, const OracleOptions& opt = {});
WavefunctionFrame propagate_protocol(const ProtocolParams& params, const Particle& particle, const Grid1D& grid,
                                     PotentialMode mode, const OracleOptions& opt = {});

// Analytic pattern the oracle run should reproduce: exact step 3/4 map, pure state.
FringePattern oracle_reference_pattern(const ProtocolParams& params, const Particle& particle,
                                       const OracleOptions& opt = {});

void write_frame_csv(std::ostream& out, const WavefunctionFrame& frame);

enum class Potential { free, harmonic, inverted };

struct CovarianceOptions {
    double rtol = 1e-10;
    int fixed_steps = 0; // > 0: fixed RK4 steps instead of adaptive
};

// Second-moment equations of the localization master equation.
GaussianState covariance_evolution(const GaussianState& state, double mass, double lambda, Potential potential,
                                   double omega, double t, const CovarianceOptions& opt = {});

struct CrossCheck {
    double l1 = 0;
    double residual = 0; // max change of the density on halving the quadrature panels
};

// L1 distance between the characteristic-function (theta-integral) form of
// the decohered density, by direct oscillatory quadrature, and the closed
// Airy-Gaussian form, on the given points.
CrossCheck convolution_cross_check(const FringePattern& pattern, const std::vector<double>& x,
                                   unsigned workers = 0);

// Theta-integral density at a single point, per metre.
double theta_form_density(const FringePattern& pattern, double x);

// L1 distance of two densities sampled on a uniform grid.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b, double dx);

} // namespace pf
