#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace pf {

// v^2 p_r of the canonical pattern (delta_x = 1); 0 when washed out.
double shape_quality(double p_c, double p_lambda);

struct ContourSample {
    double p_c = 0;
    double p_lambda = 0;
};

struct OmittedSample {
    double p_c = 0;
    std::string reason;
};

struct QualityContour {
    double q_target = 0;
    std::vector<ContourSample> samples; // ascending p_c
    std::vector<OmittedSample> omitted;

    bool empty() const { return samples.empty(); }
    double p_c_min() const { return samples.front().p_c; }
    double p_c_max() const { return samples.back().p_c; }
};

// p_lambda with shape_quality(p_c, p_lambda) = q_target to rel_tol, or a
// reason string when none exists.
struct ContourPoint {
    bool ok = false;
    double p_lambda = 0;
    std::string reason;
};
ContourPoint solve_contour_point(double q_target, double p_c, double rel_tol = 1e-5);

QualityContour quality_contour(double q_target, const std::vector<double>& p_c_grid, unsigned workers = 0);

// Log-spaced p_c grid.
std::vector<double> log_grid(double lo, double hi, int n);

// Largest sigma_lambda = 0 quality over p_c.
std::pair<double, double> max_quality(double p_c_lo = 0.01, double p_c_hi = 1.0);

// Shape-preserving interpolation of a contour in log p_c; NaN outside the
// sampled band or across a gap in it.
class ContourFunction {
public:
    explicit ContourFunction(const QualityContour& c);
    double operator()(double p_c) const;
    double q_target() const { return q_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double q_;
    double lo_ = 0, hi_ = 0;
    std::vector<double> log_pc_, p_l_;
    std::function<double(double)> interp_;
};

} // namespace pf
