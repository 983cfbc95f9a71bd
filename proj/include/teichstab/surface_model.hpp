#pragma once

// Evaluation machinery for one embedded surface: the global coordinate
// z = pi_0(xi), a ring of rectified charts along the boundary with
// Chebyshev tables of xi_k and the induced metric in chart coordinates.

#include <memory>
#include <vector>

#include "teichstab/argument_principle.hpp"
#include "teichstab/chebyshev.hpp"
#include "teichstab/geodesics.hpp"

namespace teichstab {

struct SurfaceModelOptions {
    int n_charts = 16;
    double width_frac = 0.8;  // chart half width a = width_frac * L / n_charts
    double height = 0.6;      // chart height b in units of L / 2 pi
    int cheb1 = 24;
    int cheb2 = 16;
};

/// Induced metric of one chart: h_ab = Re sum_k conj(d_a xi_k) d_b xi_k.
class PatchMetric : public ChartMetric {
public:
    PatchMetric(const ChebyshevPatch* patch, double a, double b) : patch_(patch), a_(a), b_(b) {}
    MetricJet jet(const Vec2& x) const override;
    double half_width() const override { return a_; }
    double height() const override { return b_; }

private:
    const ChebyshevPatch* patch_;
    double a_, b_;
};

class SurfaceModel {
public:
    explicit SurfaceModel(Embedding E, const SurfaceModelOptions& opt = {});
    SurfaceModel(const SurfaceModel&) = delete;
    SurfaceModel& operator=(const SurfaceModel&) = delete;

    const Embedding& embedding() const { return E_; }
    int dim() const { return E_.size(); }
    double length() const { return E_.grid().total_length(); }
    int n_charts() const { return static_cast<int>(charts_.size()); }
    const RectifiedChart& chart(int c) const { return charts_[c]; }
    const PatchMetric& chart_metric(int c) const { return metrics_[c]; }
    /// xi_k and derivatives in the coordinates of chart c.
    ChebJet chart_jet(int c, double x1, double x2, bool second = true) const { return patches_[c].eval(x1, x2, second); }
    /// Chart whose base point is nearest to l (circle distance, smallest index on ties).
    int chart_for(double l) const;
    /// Boundary parameter of the closest sample of eta_0 to z.
    double foot_point(cplx z, double* dist = nullptr) const;

    struct Point {
        std::vector<cplx> xi;   // w_k o w_0^-1
        std::vector<cplx> dxi;  // d/dz of the same
    };
    /// Point of E(M) over z = pi_0 in the global coordinate.
    Point eval(cplx z) const;
    /// Conformal factor sum_k |d_z w_k o w_0^-1|^2.
    double rho(cplx z) const;
    /// Whether z lies in pi_0(E(M)); near the contour the side is read off a chart.
    bool inside(cplx z) const;
    /// Boundary point of E(M) at parameter l.
    std::vector<cplx> boundary_point(double l) const;

private:
    Embedding E_;
    std::vector<RectifiedChart> charts_;
    std::vector<ChebyshevPatch> patches_;
    std::vector<PatchMetric> metrics_;
    double near_;  // below this contour distance evaluation goes through a chart
};

/// rho = sum_k |d_z (w_k o w_i^-1)|^2 at points of a projective cylinder.
std::vector<double> metric_in_chart(const Embedding& E, int i, const std::vector<cplx>& z);
/// rho at rectified-chart points (x^1, x^2), valid down to x^2 = 0.
std::vector<double> metric_in_chart(const Embedding& E, const RectifiedChart& chart, const std::vector<std::array<double, 2>>& x);

}  // namespace teichstab
