#include "teichstab/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace teichstab {

VecX banach_iterate(const std::function<VecX(const VecX&)>& G, const MatX& A, VecX y, double tol, int max_iter,
                    ContractionStats* stats) {
    const Eigen::PartialPivLU<MatX> lu(A);
    double prev = -1.0, ratio = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        const VecX step = lu.solve(G(y));
        if (!step.allFinite()) throw Error(ErrorKind::NoConvergence, "non-finite iterate");
        y -= step;
        const double s = step.norm();
        const double floor = tol * (1.0 + y.norm());
        // steps at rounding level carry no contraction information
        if (prev > 0.0 && prev > 100.0 * floor) {
            const double q = s / prev;
            ratio = std::max(ratio, q);
            if (q >= 1.0) {
                std::ostringstream os;
                os << "iteration step grew by " << q << " at iteration " << it;
                throw Error(ErrorKind::ContractionFailed, os.str());
            }
        }
        if (s <= floor) {
            if (stats) {
                stats->iterations = it;
                stats->ratio = ratio;
            }
            return y;
        }
        prev = s;
    }
    throw Error(ErrorKind::NoConvergence, "no convergence after " + std::to_string(max_iter) + " iterations");
}

MatX fd_jacobian(const std::function<VecX(const VecX&)>& g, const VecX& y, double step) {
    const VecX g0 = g(y);
    MatX J(g0.size(), y.size());
    for (int k = 0; k < y.size(); ++k) {
        VecX yp = y, ym = y;
        const double hk = step * std::max(1.0, std::abs(y[k]));
        yp[k] += hk;
        ym[k] -= hk;
        J.col(k) = (g(yp) - g(ym)) / (2.0 * hk);
    }
    return J;
}

namespace {

MatX partial_y(const MapXY& F, const VecX& x, const VecX& y, double step) {
    return fd_jacobian([&](const VecX& yy) { return F(x, yy); }, y, step);
}

MatX partial_x(const MapXY& F, const VecX& x, const VecX& y, double step) {
    return fd_jacobian([&](const VecX& xx) { return F(xx, y); }, x, step);
}

}  // namespace

FixedPointResult fixed_point_solve(const FixedPointProblem& prob) {
    if (!prob.f || !prob.F_ref || !prob.H) throw Error(ErrorKind::InvalidArgument, "fixed_point_solve needs f, F_ref and H");
    if (prob.samples.empty()) throw Error(ErrorKind::InvalidArgument, "no sample points");

    auto solve_at = [prob](const VecX& x, ContractionStats* st) {
        const VecX y0 = prob.f(x);
        const MatX Fy = partial_y(prob.F_ref, x, y0, prob.fd_step);
        if (!(std::abs(Fy.determinant()) > prob.m0))
            throw Error(ErrorKind::InvalidArgument, "F'_y is not invertible on the graph of f");
        return banach_iterate([&](const VecX& y) { return prob.H(x, y); }, Fy, y0, prob.tol, prob.max_iter, st);
    };

    FixedPointResult res;
    for (const VecX& x : prob.samples) {
        ContractionStats st;
        const VecX h = solve_at(x, &st);
        res.contraction = std::max(res.contraction, st.ratio);
        res.max_iterations = std::max(res.max_iterations, st.iterations);
        const VecX fx = prob.f(x);
        const double e0 = (h - fx).lpNorm<Eigen::Infinity>();
        // Dh = -H_y^-1 H_x on the graph of h, Df likewise from F_ref.
        const MatX Dh = -partial_y(prob.H, x, h, prob.fd_step).lu().solve(partial_x(prob.H, x, h, prob.fd_step));
        const MatX Df = -partial_y(prob.F_ref, x, fx, prob.fd_step).lu().solve(partial_x(prob.F_ref, x, fx, prob.fd_step));
        const double e1 = (Dh - Df).cwiseAbs().maxCoeff();
        res.c0_error = std::max(res.c0_error, e0);
        res.c1_error = std::max({res.c1_error, e0, e1});
        res.h.push_back(h);
    }
    res.eval = [solve_at](const VecX& x) { return solve_at(x, nullptr); };
    return res;
}

}  // namespace teichstab
