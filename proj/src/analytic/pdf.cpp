#include "pulsefringe/analytic/pdf.hpp"
#include "pulsefringe/analytic/airy.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace pf {

double unitary_density_u(double u, double p)
{
    if (p > gaussian_limit_p_c) {
        // skewness 1/(2 p^3) is negligible; keep the exact mean and variance
        const double mean = -0.25 / (p * p);
        const double var = p * p + 0.125 / (p * p * p * p);
        const double d = u - mean;
        return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * pi * var);
    }
    const double c = 2.0 * std::sqrt(2.0 * pi) * p;
    double p2 = p * p;
    double p4 = p2 * p2;
    double z = u + p4;
    if (z <= 0) {
        double a = airy(z);
        return c * a * a * std::exp(2.0 * p2 * u + 4.0 / 3.0 * p4 * p2);
    }
    // exp(2 p^2 u + 4 p^6/3 - 2 zeta) written without the large cancelling terms
    double z32 = z * std::sqrt(z);
    double p6 = p4 * p2;
    double e = -4.0 / 3.0 * u * (3.0 * p4 * p4 + 3.0 * p4 * u + u * u) / (z32 + p6) + 2.0 * p2 * u;
    double a = airy_scaled(z);
    return c * a * a * std::exp(e);
}

double decohered_density_u(double u, double p, double pl)
{
    if (!(pl > 0))
        return unitary_density_u(u, p);
    if (p > gaussian_limit_p_c) {
        const double mean = -0.25 / (p * p);
        const double var = p * p + 0.125 / (p * p * p * p) + pl * pl;
        const double d = u - mean;
        return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * pi * var);
    }
    double span = 8.0 * pl;
    // fringe period near u, unless sigma_c already smooths it out
    double h = std::min(pl / 4.0, std::max(p / 4.0, 0.5 / std::sqrt(1.0 + std::fabs(u) + span)));
    int n = static_cast<int>(std::ceil(span / h));
    h = span / n;
    double sum = 0, wsum = 0;
    for (int k = -n; k <= n; ++k) {
        double v = k * h;
        double w = std::exp(-0.5 * v * v / (pl * pl));
        sum += w * unitary_density_u(u - v, p);
        wsum += w;
    }
    return sum / wsum;
}

double unitary_density(const FringePattern& f, double x)
{
    return unitary_density_u(x / f.delta_x, f.p_c) / f.delta_x;
}

double decohered_density(const FringePattern& f, double x)
{
    return decohered_density_u(x / f.delta_x, f.p_c, f.p_lambda) / f.delta_x;
}

GridBounds required_grid(const FringePattern& f, bool decohered)
{
    GridBounds b;
    double extra = decohered ? 6.0 * f.sigma_lambda : 0.0;
    b.x_min = -10.0 * f.delta_x - 6.0 * f.sigma_c - extra;
    b.x_max = 4.0 * f.delta_x + 6.0 * f.sigma_c + extra;
    b.max_step = std::min(f.sigma_c, f.delta_x) / 20.0;
    return b;
}

GridBounds recommended_grid(const FringePattern& f, double tail_mass)
{
    require(tail_mass > 0 && tail_mass < 1, "tail_mass must lie in (0, 1)");
    // left-tail mass beyond u = -s is about erfc(p_c sqrt(2 s))
    double e = boost::math::erfc_inv(tail_mass);
    double s = e * e / (2.0 * f.p_c * f.p_c);
    double blur = 8.0 * (f.p_c + f.p_lambda);
    GridBounds b;
    b.x_min = -(std::max(10.0, 1.2 * s) + blur) * f.delta_x;
    b.x_max = (4.0 + blur) * f.delta_x;
    b.max_step = std::min(f.sigma_c, f.delta_x) / 20.0;
    return b;
}

std::vector<double> uniform_grid(double x_min, double x_max, double step)
{
    require(x_max > x_min && step > 0, "uniform_grid: empty range");
    auto n = static_cast<std::size_t>(std::ceil((x_max - x_min) / step)) + 1;
    double h = (x_max - x_min) / static_cast<double>(n - 1);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = x_min + static_cast<double>(i) * h;
    x.back() = x_max;
    return x;
}

std::vector<double> uniform_grid(const GridBounds& b)
{
    return uniform_grid(b.x_min, b.x_max, b.max_step);
}

namespace {

double check_uniform(const std::vector<double>& x)
{
    if (x.size() < 3)
        throw GridError("grid needs at least 3 points");
    double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    if (!(h > 0))
        throw GridError("grid must be increasing");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::fabs(x[i] - (x.front() + static_cast<double>(i) * h)) > 1e-6 * h)
            throw GridError("grid must be uniform");
    return h;
}

void check_bounds(const FringePattern& f, const std::vector<double>& x, double h, bool decohered)
{
    auto b = required_grid(f, decohered);
    const double slack = 1e-12 * (b.x_max - b.x_min);
    if (x.front() > b.x_min + slack || x.back() < b.x_max - slack || h > b.max_step * (1 + 1e-9)) {
        std::ostringstream s;
        s << std::setprecision(6) << "grid insufficient: need span [" << b.x_min << ", " << b.x_max
          << "] m with spacing <= " << b.max_step << " m; got [" << x.front() << ", " << x.back()
          << "] m with spacing " << h << " m";
        throw GridError(s.str());
    }
}

// Unitary density at x0 + i h for i in [0, n), by trapezoid convolution.
std::vector<double> unitary_on(const FringePattern& f, double x0, double h, std::size_t n)
{
    const double sc = f.sigma_c;
    const auto J = static_cast<long>(std::ceil(6.0 * std::sqrt(2.0) * sc / h));
    std::vector<double> ai(n + 2 * static_cast<std::size_t>(J));
    for (std::size_t k = 0; k < ai.size(); ++k)
        ai[k] = airy((x0 + (static_cast<double>(k) - static_cast<double>(J)) * h) / f.delta_x);
    std::vector<double> w(2 * static_cast<std::size_t>(J) + 1);
    for (long j = -J; j <= J; ++j) {
        double y = static_cast<double>(j) * h;
        w[static_cast<std::size_t>(j + J)] = std::exp(-y * y / (4.0 * sc * sc));
    }
    const double norm = 1.0 / (std::sqrt(2.0 * pi) * f.delta_x * f.delta_x * sc);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double a = 0;
        // x_i - y_j sits at index i - j + J of the Airy samples
        for (long j = -J; j <= J; ++j)
            a += ai[static_cast<std::size_t>(static_cast<long>(i) - j + J)] * w[static_cast<std::size_t>(j + J)];
        a *= h;
        out[i] = a * a * norm;
    }
    return out;
}

} // namespace

std::vector<double> unitary_pdf(const FringePattern& f, const std::vector<double>& x)
{
    double h = check_uniform(x);
    check_bounds(f, x, h, false);
    return unitary_on(f, x.front(), h, x.size());
}

std::vector<double> decohered_pdf(const FringePattern& f, const std::vector<double>& x)
{
    double h = check_uniform(x);
    check_bounds(f, x, h, true);
    if (f.sigma_lambda == 0)
        return unitary_on(f, x.front(), h, x.size());
    std::vector<double> out(x.size());
    if (f.sigma_lambda < 4.0 * h) {
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = decohered_density(f, x[i]);
        return out;
    }
    const auto K = static_cast<long>(std::ceil(6.0 * f.sigma_lambda / h));
    auto pu = unitary_on(f, x.front() - static_cast<double>(K) * h, h, x.size() + 2 * static_cast<std::size_t>(K));
    std::vector<double> g(2 * static_cast<std::size_t>(K) + 1);
    double gs = 0;
    for (long k = -K; k <= K; ++k) {
        double y = static_cast<double>(k) * h;
        gs += g[static_cast<std::size_t>(k + K)] = std::exp(-0.5 * y * y / (f.sigma_lambda * f.sigma_lambda));
    }
    for (auto& v : g)
        v /= gs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = 0;
        for (long k = -K; k <= K; ++k)
            s += pu[static_cast<std::size_t>(static_cast<long>(i) - k + K)] * g[static_cast<std::size_t>(k + K)];
        out[i] = s;
    }
    return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y)
{
    require(x.size() == y.size(), "trapezoid: size mismatch");
    double s = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

void write_density_csv(std::ostream& out, const std::vector<double>& x, const std::vector<double>& density,
                       const std::map<std::string, std::string>& meta)
{
    require(x.size() == density.size(), "write_density_csv: size mismatch");
    for (auto& [k, v] : meta)
        out << "# " << k << " = " << v << "\n";
    out << "# x: position [m]; density: probability density [1/m]\n";
    out << "x,density\n";
    out << std::setprecision(12);
    for (std::size_t i = 0; i < x.size(); ++i)
        out << x[i] << "," << density[i] << "\n";
}

} // namespace pf
