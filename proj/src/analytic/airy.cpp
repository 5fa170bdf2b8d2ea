#include "pulsefringe/analytic/airy.hpp"
#include "pulsefringe/core/constants.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>

namespace pf {

namespace {

constexpr long double ai0 = 0.355028053887817239260063186004183L;
constexpr long double aip0 = 0.258819403792806798405183560189203L; // -Ai'(0)
constexpr double series_lo = -9.0;
constexpr double series_hi = 7.0;
constexpr double bessel_lo = 2.0;

double series(double xd)
{
    long double x = xd;
    long double x3 = x * x * x;
    long double f = 1, g = x;
    long double tf = 1, tg = x;
    for (int k = 1; k < 200; ++k) {
        tf *= x3 / ((3.0L * k - 1) * (3.0L * k));
        tg *= x3 / ((3.0L * k) * (3.0L * k + 1));
        f += tf;
        g += tg;
        if (k > 3 && std::fabs(tf) + std::fabs(tg) < 1e-22L * (std::fabs(f) + std::fabs(g) + 1))
            break;
    }
    return static_cast<double>(ai0 * f - aip0 * g);
}

// Ai(x) exp(zeta) from K_{1/3}; the series cancels badly for moderate positive x.
double bessel_scaled(double x, double zeta)
{
    return std::sqrt(x / 3.0) / pi * boost::math::cyl_bessel_k(1.0 / 3.0, zeta) * std::exp(zeta);
}

// Terms u_k / zeta^k of the Airy asymptotic series, stopped at the smallest term.
int asymptotic_terms(double zeta, double* t, int kmax)
{
    t[0] = 1;
    double u = 1;
    int k = 1;
    for (; k < kmax; ++k) {
        u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
        t[k] = u / std::pow(zeta, k);
        if (t[k] > t[k - 1] || t[k] < 1e-18)
            break;
    }
    return k;
}

double asymptotic_positive(double x)
{
    double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    double t[64];
    int n = asymptotic_terms(zeta, t, 64);
    double sum = 0;
    for (int k = n - 1; k >= 0; --k)
        sum += (k % 2 ? -t[k] : t[k]);
    return std::exp(-zeta) / (2.0 * std::sqrt(pi) * std::pow(x, 0.25)) * sum;
}

double asymptotic_negative(double x)
{
    double z = -x;
    double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    double t[64];
    int n = asymptotic_terms(zeta, t, 64);
    double even = 0, odd = 0;
    for (int k = n - 1; k >= 0; --k) {
        double sgn = ((k / 2) % 2) ? -1.0 : 1.0;
        if (k % 2)
            odd += sgn * t[k];
        else
            even += sgn * t[k];
    }
    double ph = zeta - pi / 4;
    return (std::cos(ph) * even + std::sin(ph) * odd) / (std::sqrt(pi) * std::pow(z, 0.25));
}

} // namespace

double airy_scaled(double x)
{
    if (!(x > 0))
        return airy(x);
    double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    if (x <= bessel_lo)
        return airy(x) * std::exp(zeta);
    if (x <= series_hi)
        return bessel_scaled(x, zeta);
    double t[64];
    int n = asymptotic_terms(zeta, t, 64);
    double sum = 0;
    for (int k = n - 1; k >= 0; --k)
        sum += (k % 2 ? -t[k] : t[k]);
    return sum / (2.0 * std::sqrt(pi) * std::pow(x, 0.25));
}

double airy(double x)
{
    if (std::isnan(x))
        return x;
    if (x > bessel_lo && x <= series_hi) {
        double zeta = 2.0 / 3.0 * x * std::sqrt(x);
        return std::sqrt(x / 3.0) / pi * boost::math::cyl_bessel_k(1.0 / 3.0, zeta);
    }
    if (x >= series_lo && x <= series_hi)
        return series(x);
    if (x > series_hi)
        return x > 110 ? 0.0 : asymptotic_positive(x);
    return asymptotic_negative(x);
}

} // namespace pf
