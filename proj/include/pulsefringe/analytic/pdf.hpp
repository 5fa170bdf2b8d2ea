#pragma once

#include "pulsefringe/analytic/protocol.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace pf {

// Pointwise densities per unit u = x/delta_x (closed form of the Airy-Gaussian
// convolution). The decohered form adds a trapezoid convolution over the
// sigma_lambda Gaussian.
double unitary_density_u(double u, double p_c);
// Above this p_c the unitary density is evaluated as its Gaussian limit.
inline constexpr double gaussian_limit_p_c = 200.0;
double decohered_density_u(double u, double p_c, double p_lambda);

// Same, per metre.
double unitary_density(const FringePattern& f, double x);
double decohered_density(const FringePattern& f, double x);

struct GridBounds {
    double x_min = 0;
    double x_max = 0;
    double max_step = 0;
};

// Minimum span and spacing accepted by unitary_pdf/decohered_pdf.
GridBounds required_grid(const FringePattern& f, bool decohered);
// Span whose left tail (the slowly decaying far fringes) holds less than
// tail_mass probability.
GridBounds recommended_grid(const FringePattern& f, double tail_mass = 1e-4);
std::vector<double> uniform_grid(double x_min, double x_max, double step);
std::vector<double> uniform_grid(const GridBounds& b);

// Direct trapezoid convolution on a uniform grid. Throws GridError with the
// required bounds when the grid is too short or too coarse.
std::vector<double> unitary_pdf(const FringePattern& f, const std::vector<double>& x);
std::vector<double> decohered_pdf(const FringePattern& f, const std::vector<double>& x);

double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

void write_density_csv(std::ostream& out, const std::vector<double>& x, const std::vector<double>& density,
                       const std::map<std::string, std::string>& meta = {});

} // namespace pf
