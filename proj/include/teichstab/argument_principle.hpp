#pragma once

// Contour-integral evaluators on boundary traces: the generalized argument
// principle, Cauchy reconstruction of w_k o w_i^-1 and its derivatives,
// rectified boundary coordinates and the near-boundary evaluator.

#include <array>
#include <memory>
#include <vector>

#include "teichstab/holotrace.hpp"

namespace teichstab {

/// Holomorphic embedding given by boundary traces of w_1..w_n.
class Embedding {
public:
    Embedding(std::vector<HoloTrace> traces, std::shared_ptr<const DnMap> source);

    int size() const { return static_cast<int>(traces_.size()); }
    const HoloTrace& trace(int k) const { return traces_[k]; }
    const BoundaryFn& eta(int k) const { return traces_[k].eta; }
    /// Tangential derivative of eta_k.
    const BoundaryFn& deta(int k) const { return deta_[k]; }
    const std::shared_ptr<const DnMap>& source() const { return source_; }
    const BoundaryGrid& grid() const { return traces_.front().eta.grid(); }

private:
    std::vector<HoloTrace> traces_;
    std::vector<BoundaryFn> deta_;
    std::shared_ptr<const DnMap> source_;
};

/// 5 L / n: closer than this to eta(Gamma) the trapezoid rule is not trusted.
double separation_floor(const BoundaryGrid& grid);
/// min_j |eta(l_j) - z|.
double contour_distance(const BoundaryFn& eta, cplx z);

/// (1 / 2 pi i) int eta_tilde d eta / (eta - z) by the trapezoid rule.
cplx gap_integral(const BoundaryFn& eta_tilde, const BoundaryFn& eta, cplx z);

/// Winding count of eta about z; residual before rounding returned through `residual`.
int multiplicity(const BoundaryFn& eta, cplx z, double* residual = nullptr);

/// d^m (w_k o w_i^-1)(z) for all k.
std::vector<cplx> cauchy_eval(const Embedding& E, int i, cplx z, int m);

/// Coordinates x^1 = Re (z - z0)/d0, x^2 = Im (z - eta_i(l~^-1(x^1)))/d0 on
/// the half rectangle (-a, a) x [0, b), with z0 = eta_i(l0), d0 = eta_i'(l0).
class RectifiedChart {
public:
    RectifiedChart(const BoundaryFn& eta_i, const BoundaryFn& deta_i, int index, double l0, double a, double b);

    int trace_index() const { return index_; }
    double base_point() const { return l0_; }
    double half_width() const { return a_; }
    double height() const { return b_; }
    cplx z0() const { return z0_; }
    cplx d0() const { return d0_; }
    /// Arclength interval covered by the chart's boundary segment.
    double l_min() const { return l_lo_; }
    double l_max() const { return l_hi_; }

    bool contains(double x1, double x2, double slack = 1e-12) const;

    double l_tilde(double l) const;
    /// Inverse of l_tilde; the result lies in [l_min, l_max] (not wrapped).
    double l_tilde_inv(double x1) const;
    /// Forward map z -> (x^1, x^2).
    std::array<double, 2> to_chart(cplx z) const;
    /// Inverse map (x^1, x^2) -> z.
    cplx from_chart(double x1, double x2) const;
    /// dz/dx^1 and dz/dx^2.
    std::array<cplx, 2> jacobian(double x1, double x2) const;

    cplx eta(double l) const;
    cplx deta(double l) const;

private:
    std::vector<cplx> eta_c_;
    std::vector<cplx> deta_c_;
    double period_;
    int index_;
    double l0_, a_, b_;
    cplx z0_, d0_;
    double l_lo_ = 0.0, l_hi_ = 0.0;
};

RectifiedChart rectified_coords(const Embedding& E, int i, double l0, double a, double b);

struct NearBoundaryOptions {
    int taylor_order = -1;  // default m + 2
    double delta = -1.0;    // default 10 x separation floor
};

/// d^m (w_j o w_i^-1) at z~^-1(x) with the boundary Taylor polynomial at the
/// foot point subtracted on the excised arc. Valid up to and on x^2 = 0.
std::vector<cplx> near_boundary_eval(const Embedding& E, const RectifiedChart& chart, double x1, double x2, int m,
                                     const NearBoundaryOptions& opt = {});

/// Applies beta_hat to every trace. Each result is checked against
/// lambda_prime at `tol`; multiplicity of eta'_i at `probes` must stay 1.
Embedding induced_embedding(const Embedding& E, std::shared_ptr<const DnMap> lambda_prime, const TraceProjector& P_prime,
                            double tol = 1e-8, int i = 0, const std::vector<cplx>& probes = {});

}  // namespace teichstab
