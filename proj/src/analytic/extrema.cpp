#include "pulsefringe/analytic/extrema.hpp"
#include "pulsefringe/analytic/pdf.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>

namespace pf {

namespace {

double refine(double seed, double p_c, double p_l, bool maximum)
{
    const double half = 0.3;
    double lo = seed - half, hi = seed + half;
    auto f = [&](double u) {
        double d = decohered_density_u(u, p_c, p_l);
        return maximum ? -d : d;
    };
    auto r = boost::math::tools::brent_find_minima(f, lo, hi, 40);
    double edge = 1e-6;
    if (r.first - lo < edge || hi - r.first < edge)
        throw NoFringes(maximum ? "maximum not interior to its search window"
                                : "minimum not interior to its search window");
    return r.first;
}

} // namespace

Extrema extrema_positions_u(double p_c, double p_l)
{
    double shift = std::pow(p_c, 4);
    Extrema e;
    e.x_max1 = refine(seed_max1 - shift, p_c, p_l, true);
    e.x_max2 = refine(seed_max2 - shift, p_c, p_l, true);
    e.x_min1 = refine(seed_min1 - shift, p_c, p_l, false);
    e.x_min2 = refine(seed_min2 - shift, p_c, p_l, false);
    return e;
}

Extrema extrema_positions(const FringePattern& f)
{
    auto e = extrema_positions_u(f.p_c, f.p_lambda);
    e.x_max1 *= f.delta_x;
    e.x_max2 *= f.delta_x;
    e.x_min1 *= f.delta_x;
    e.x_min2 *= f.delta_x;
    return e;
}

Moments moments_after_step4(const FringePattern& f, double mass, double omega4)
{
    double dx3 = f.delta_x * f.delta_x * f.delta_x;
    double sc2 = f.sigma_c * f.sigma_c;
    double sl2 = f.sigma_lambda * f.sigma_lambda;
    double mw = mass * omega4;
    Moments m;
    m.mean_x = -dx3 / (4.0 * sc2);
    m.x2 = sc2 * (1.0 + 3.0 * dx3 * dx3 / (16.0 * sc2 * sc2 * sc2)) + sl2;
    m.var_x = sc2 + dx3 * dx3 / (8.0 * sc2 * sc2) + sl2;
    m.mean_p = -mw * dx3 / (4.0 * sc2);
    m.p2 = hbar * hbar / (4.0 * sc2) + 3.0 * mw * mw * dx3 * dx3 / (16.0 * sc2 * sc2) + mw * mw * sc2
        + mw * mw * sl2;
    m.var_p = hbar * hbar / (4.0 * sc2) + mw * mw * m.var_x;
    return m;
}

} // namespace pf
