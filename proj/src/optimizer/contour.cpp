#include "pulsefringe/optimizer/contour.hpp"
#include "pulsefringe/core/errors.hpp"
#include "pulsefringe/metrics/metrics.hpp"
#include "pulsefringe/numerics/parallel.hpp"

#include <cmath>
// Boost 1.74 pchip calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace pf {

double shape_quality(double p_c, double p_lambda)
{
    return shape_metrics(p_c, p_lambda).quality;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    require(lo > 0 && hi > lo && n >= 2, "log_grid: invalid range");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

ContourPoint solve_contour_point(double q_target, double p_c, double rel_tol)
{
    require(q_target > 0, "q_target must be positive");
    ContourPoint out;
    auto f = [&](double pl) { return shape_quality(p_c, pl) - q_target; };
    const double f0 = f(0.0);
    if (!(f0 > 0)) {
        std::ostringstream s;
        s << "quality " << f0 + q_target << " at p_lambda = 0 does not exceed the target";
        out.reason = s.str();
        return out;
    }
    double lo = 0.0, hi = std::max(0.05, p_c);
    while (f(hi) > 0) {
        lo = hi;
        hi *= 1.5;
        if (hi > 50) {
            out.reason = "quality stays above target for all p_lambda";
            return out;
        }
    }
    boost::uintmax_t iters = 100;
    auto tol = [&](double a, double b) { return std::fabs(a - b) <= 1e-10 * std::max(std::fabs(a), 1e-6); };
    auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
    const double pl = 0.5 * (r.first + r.second);
    const double q = shape_quality(p_c, pl);
    if (std::fabs(q / q_target - 1.0) > rel_tol) {
        std::ostringstream s;
        s << "quality jumps across the contour (fringe detection limit), q = " << q;
        out.reason = s.str();
        return out;
    }
    out.ok = true;
    out.p_lambda = pl;
    return out;
}

QualityContour quality_contour(double q_target, const std::vector<double>& p_c_grid, unsigned workers)
{
    require(q_target > 0, "q_target must be positive");
    std::vector<double> grid = p_c_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<ContourPoint> pts(grid.size());
    num::parallel_for(grid.size(), workers, [&](std::size_t i) { pts[i] = solve_contour_point(q_target, grid[i]); });

    QualityContour c;
    c.q_target = q_target;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (pts[i].ok)
            c.samples.push_back({grid[i], pts[i].p_lambda});
        else
            c.omitted.push_back({grid[i], pts[i].reason});
    }
    return c;
}

std::pair<double, double> max_quality(double lo, double hi)
{
    auto grid = log_grid(lo, hi, 48);
    std::vector<double> q(grid.size());
    num::parallel_for(grid.size(), 0, [&](std::size_t i) { q[i] = shape_quality(grid[i], 0.0); });
    auto best = static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
    double a = grid[best > 0 ? best - 1 : 0], b = grid[std::min(best + 1, grid.size() - 1)];
    auto r = boost::math::tools::brent_find_minima([](double pc) { return -shape_quality(pc, 0.0); }, a, b, 30);
    return {r.first, -r.second};
}

ContourFunction::ContourFunction(const QualityContour& c) : q_(c.q_target)
{
    require(!c.samples.empty(), "empty quality contour");
    // longest run of samples not interrupted by an omitted grid point
    std::size_t best_start = 0, best_len = 0, start = 0;
    auto gap_between = [&](double a, double b) {
        return std::any_of(c.omitted.begin(), c.omitted.end(), [&](const OmittedSample& o) {
            return o.p_c > a && o.p_c < b;
        });
    };
    for (std::size_t i = 1; i <= c.samples.size(); ++i) {
        if (i == c.samples.size() || gap_between(c.samples[i - 1].p_c, c.samples[i].p_c)) {
            if (i - start > best_len) {
                best_len = i - start;
                best_start = start;
            }
            start = i;
        }
    }
    for (std::size_t i = best_start; i < best_start + best_len; ++i) {
        log_pc_.push_back(std::log(c.samples[i].p_c));
        p_l_.push_back(c.samples[i].p_lambda);
    }
    lo_ = c.samples[best_start].p_c;
    hi_ = c.samples[best_start + best_len - 1].p_c;
    if (log_pc_.size() >= 4) {
        auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
            std::vector<double>(log_pc_), std::vector<double>(p_l_));
        interp_ = [spline](double lx) { return (*spline)(lx); };
    } else {
        interp_ = [xs = log_pc_, ys = p_l_](double lx) {
            if (xs.size() == 1)
                return ys[0];
            auto it = std::upper_bound(xs.begin(), xs.end(), lx);
            std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - xs.begin()), 1, xs.size() - 1);
            double w = (lx - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return ys[i - 1] + w * (ys[i] - ys[i - 1]);
        };
    }
}

double ContourFunction::operator()(double p_c) const
{
    if (!(p_c >= lo_ && p_c <= hi_))
        return std::numeric_limits<double>::quiet_NaN();
    return interp_(std::log(p_c));
}

} // namespace pf
