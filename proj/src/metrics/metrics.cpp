#include "pulsefringe/metrics/metrics.hpp"
#include "pulsefringe/analytic/pdf.hpp"
#include "pulsefringe/core/constants.hpp"
#include "pulsefringe/core/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pf {

double run_count(double quality, double m_sigma)
{
    if (!(quality > 0))
        return std::numeric_limits<double>::infinity();
    return std::ceil(pi * pi / 4.0 * m_sigma * m_sigma / quality);
}

namespace {

PatternMetrics finish(double dmax, double dmin, double p_r, double m_sigma)
{
    PatternMetrics m;
    double s = dmax + dmin;
    m.visibility = s > 0 ? std::clamp((dmax - dmin) / s, 0.0, 1.0) : 0.0;
    m.p_r = std::clamp(p_r, 0.0, 1.0);
    m.quality = m.visibility * m.visibility * m.p_r;
    m.n_runs = run_count(m.quality, m_sigma);
    m.fringes = m.visibility > 0;
    return m;
}

double interp(const std::vector<double>& x, const std::vector<double>& y, double at)
{
    if (at <= x.front() || at >= x.back())
        throw GridError("extremum outside the density grid");
    auto it = std::upper_bound(x.begin(), x.end(), at);
    auto i = static_cast<std::size_t>(it - x.begin());
    double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + w * (y[i] - y[i - 1]);
}

} // namespace

PatternMetrics pattern_metrics(const std::vector<double>& x, const std::vector<double>& pdf, const Extrema& e,
                               double m_sigma)
{
    require(x.size() == pdf.size() && x.size() > 2, "pattern_metrics: bad grid");
    double dmax = interp(x, pdf, e.x_max2);
    double dmin = interp(x, pdf, e.x_min1);
    // trapezoid over [x_min2, x_min1] with interpolated end pieces
    double a = e.x_min2, b = e.x_min1;
    double pa = interp(x, pdf, a), pb = interp(x, pdf, b);
    double sum = 0, prev_x = a, prev_y = pa;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= a)
            continue;
        if (x[i] >= b)
            break;
        sum += 0.5 * (x[i] - prev_x) * (pdf[i] + prev_y);
        prev_x = x[i];
        prev_y = pdf[i];
    }
    sum += 0.5 * (b - prev_x) * (pb + prev_y);
    return finish(dmax, dmin, sum, m_sigma);
}

double probability_between(const FringePattern& f, double a, double b)
{
    using GL = boost::math::quadrature::gauss<double, 30>;
    double ua = a / f.delta_x, ub = b / f.delta_x;
    const int panels = std::max(2, static_cast<int>(std::ceil((ub - ua) / 0.5)));
    double h = (ub - ua) / panels, sum = 0;
    for (int i = 0; i < panels; ++i) {
        double lo = ua + i * h;
        sum += GL::integrate([&](double u) { return decohered_density_u(u, f.p_c, f.p_lambda); }, lo, lo + h);
    }
    return sum;
}

PatternMetrics pattern_metrics(const FringePattern& f, const Extrema& e, double m_sigma)
{
    double dmax = decohered_density(f, e.x_max2);
    double dmin = decohered_density(f, e.x_min1);
    return finish(dmax, dmin, probability_between(f, e.x_min2, e.x_min1), m_sigma);
}

PatternMetrics shape_metrics(double p_c, double p_lambda, double m_sigma, Extrema* out)
{
    auto f = FringePattern::canonical(p_c, p_lambda);
    try {
        auto e = extrema_positions(f);
        if (out)
            *out = e;
        return pattern_metrics(f, e, m_sigma);
    } catch (const NoFringes&) {
        PatternMetrics m;
        m.n_runs = std::numeric_limits<double>::infinity();
        return m;
    }
}

} // namespace pf
