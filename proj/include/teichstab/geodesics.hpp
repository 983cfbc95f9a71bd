#pragma once

// Geodesic shooting from the boundary segment x^2 = 0 of a chart half
// rectangle, producing semi-geodesic coordinates (mu, r).

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "teichstab/chebyshev.hpp"
#include "teichstab/errors.hpp"

namespace teichstab {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

struct MetricJet {
    Mat2 h;
    std::array<Mat2, 2> dh;  // d h / d x^1, d h / d x^2
};

/// Metric components on a chart half rectangle (-a, a) x [0, b).
class ChartMetric {
public:
    virtual ~ChartMetric() = default;
    virtual MetricJet jet(const Vec2& x) const = 0;
    virtual double half_width() const = 0;
    virtual double height() const = 0;
};

/// h = rho(x) delta with rho and its gradient supplied as functions.
class ConformalMetric : public ChartMetric {
public:
    ConformalMetric(std::function<double(const Vec2&)> rho, std::function<Vec2(const Vec2&)> grad_rho, double a, double b)
        : rho_(std::move(rho)), grad_(std::move(grad_rho)), a_(a), b_(b) {}
    MetricJet jet(const Vec2& x) const override;
    double half_width() const override { return a_; }
    double height() const override { return b_; }

private:
    std::function<double(const Vec2&)> rho_;
    std::function<Vec2(const Vec2&)> grad_;
    double a_, b_;
};

/// Inward unit normal -nu_h at (mu, 0).
Vec2 inward_normal(const ChartMetric& h, double mu);

struct GeodesicState {
    Vec2 x;
    Vec2 v;
};

/// Integrates the geodesic starting at (mu, 0) with velocity -nu_h for
/// arclength r using n_steps classical RK4 steps of size r / n_steps.
/// Throws ChartExit when the curve leaves the half rectangle.
GeodesicState shoot(const ChartMetric& h, double mu, double r, int n_steps = 64, std::vector<GeodesicState>* path = nullptr);

/// Table of x_h(r, mu) over a (mu, r) grid.
struct SemiGeodesicChart {
    std::vector<double> mu;
    std::vector<double> r;
    std::vector<std::vector<Vec2>> x;  // x[i_mu][i_r]
    double r0 = 0.0;
    double max_speed_defect = 0.0;  // max | |dx/dr|_h - 1 |
    double min_jacobian_ratio = 1.0;

    Vec2 at(int i_mu, int i_r) const { return x[i_mu][i_r]; }
};

struct ShootOptions {
    int n_mu = 33;
    int n_r = 17;
    double mu_extent = -1.0;  // default: chart half width / 2
    double step = -1.0;       // default r_max / 64
    double fd_mu = 1e-5;      // step for d x / d mu
    double caustic_ratio = 1e-3;
};

/// Shoots the bundle for r in [0, r_max]. Throws CausticDetected when
/// det[dx/dmu, dx/dr] stops being positive (or drops below caustic_ratio of
/// its initial value) and ChartExit when a geodesic leaves the chart.
SemiGeodesicChart shoot_geodesics(const ChartMetric& h, double r_max, const ShootOptions& opt = {});

/// sup over the table of |x_a - x_b| and of |d(x_a - x_b)| (finite differences
/// on the (mu, r) grid), combined as max: the C^1 distance of two bundles.
double bundle_c1_distance(const SemiGeodesicChart& a, const SemiGeodesicChart& b);

/// Smooth interpolant of (mu, r) -> x_h(r, mu) on [-mu_ext, mu_ext] x [0, r_max],
/// built by shooting one geodesic per Chebyshev node (step r / 64).
class GeodesicPatch {
public:
    GeodesicPatch() = default;
    GeodesicPatch(const ChartMetric& h, double mu_ext, double r_max, int n_mu = 24, int n_r = 14);

    double mu_extent() const { return mu_ext_; }
    double r_max() const { return r_max_; }
    Vec2 x(double mu, double r) const;
    /// Columns d x / d mu and d x / d r.
    Mat2 jacobian(double mu, double r) const;
    /// Solves x(mu, r) = target by Newton; false when the solution leaves the
    /// table (with 5% slack in mu, any r > r_max) or Newton stalls.
    bool invert(const Vec2& target, double& mu, double& r) const;

private:
    ChebyshevPatch patch_;
    Vec2 n0_{0.0, 1.0};
    double mu_ext_ = 0.0, r_max_ = 0.0;
};

}  // namespace teichstab
