#pragma once

// Banach iteration for perturbed implicit equations H(x, y) = 0 near the
// known solution graph y = f(x) of F(x, y) = 0.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "teichstab/errors.hpp"

namespace teichstab {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

using MapXY = std::function<VecX(const VecX& x, const VecX& y)>;

struct ContractionStats {
    int iterations = 0;
    double ratio = 0.0;  // largest observed |step_{k+1}| / |step_k|
};

/// y <- y - A^-1 G(y) until the step is below tol (1 + |y|).
/// Throws ContractionFailed when a step does not shrink, NoConvergence
/// after max_iter.
VecX banach_iterate(const std::function<VecX(const VecX&)>& G, const MatX& A, VecX y, double tol, int max_iter,
                    ContractionStats* stats = nullptr);

/// Forward-difference Jacobian of y -> g(y).
MatX fd_jacobian(const std::function<VecX(const VecX&)>& g, const VecX& y, double step);

struct FixedPointProblem {
    std::function<VecX(const VecX&)> f;  // known zero set of F_ref
    MapXY F_ref;
    MapXY H;
    std::vector<VecX> samples;  // points of the domain X where h is reported
    double m0 = 1e-8;           // lower bound for |det F'_y| on the graph of f
    double tol = 1e-14;
    int max_iter = 200;
    double fd_step = 1e-6;
};

struct FixedPointResult {
    std::vector<VecX> h;    // h(samples[k])
    double c0_error = 0.0;  // sup |h - f|
    double c1_error = 0.0;  // max(sup |h - f|, sup |Dh - Df|)
    double contraction = 0.0;
    int max_iterations = 0;
    /// h at an arbitrary point of X.
    std::function<VecX(const VecX&)> eval;
};

FixedPointResult fixed_point_solve(const FixedPointProblem& prob);

}  // namespace teichstab
