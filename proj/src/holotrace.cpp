#include "teichstab/holotrace.hpp"

#include <algorithm>
#include <cmath>

namespace teichstab {

TraceProjector projector_P(const DnMap& lambda, double rank_tol) {
    if (!(rank_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "rank_tol must be positive");
    // (Lambda J)^2 on the guard grid, then truncated, so modes near K see their true partners.
    const BoundaryGrid& gg = lambda.guard().grid();
    const BoundaryOperator lj = lambda.guard() * BoundaryOperator::integration(gg);
    const BoundaryOperator kg = BoundaryOperator::identity(gg) + lj * lj;
    const BoundaryGrid& grid = lambda.grid();
    const int d = grid.basis_dim();
    const Eigen::MatrixXd k = kg.restricted(grid).matrix().bottomRightCorner(d - 1, d - 1);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeFullU);
    const Eigen::VectorXd& s = svd.singularValues();
    const double ref = std::max(1.0, s.size() ? s(0) : 0.0);
    const double thr = rank_tol * ref;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > thr / 10.0 && s(i) < thr * 10.0)
            throw Error(ErrorKind::AmbiguousRank, "singular value " + std::to_string(s(i)) + " within a factor 10 of threshold " +
                                                      std::to_string(thr));

    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
    p(0, 0) = 1.0;
    int rank = 1;
    for (int i = 0; i < s.size(); ++i) {
        if (s(i) >= thr) continue;
        const Eigen::VectorXd u = svd.matrixU().col(i);
        p.bottomRightCorner(d - 1, d - 1) += u * u.transpose();
        ++rank;
    }
    TraceProjector out{BoundaryOperator(grid, std::move(p)), d - rank, s, thr};
    return out;
}

BoundaryFn j_lambda(const DnMap& lambda, const BoundaryFn& f) {
    const BoundaryGrid& grid = lambda.grid();
    const Eigen::VectorXd y = BoundaryOperator::integration(grid).matrix() * (lambda.op().matrix() * to_basis(f));
    return from_basis(grid, y);
}

HoloTrace trace_lift(const BoundaryFn& f, double c, std::shared_ptr<const DnMap> lambda, const TraceProjector& P) {
    const BoundaryFn pf = P.P.apply(f.real_part());
    const BoundaryFn im = j_lambda(*lambda, pf) + BoundaryFn::constant(pf.grid(), c);
    return {pf + im * cplx(0.0, 1.0), std::move(lambda)};
}

TraceResidual trace_residual(const BoundaryFn& eta, const DnMap& lambda, const TraceProjector& P) {
    const BoundaryFn re = eta.real_part();
    const BoundaryFn im = eta.imag_part();
    const BoundaryFn pre = P.P.apply(re);
    const BoundaryFn r1 = im - j_lambda(lambda, pre) - BoundaryFn::constant(eta.grid(), im.mean().real());
    const BoundaryFn r2 = re - pre;
    const double h1 = std::max(eta.h1_norm(), 1e-300), l2 = std::max(eta.l2_norm(), 1e-300);
    return {r1.l2_norm() / h1, r2.l2_norm() / l2};
}

bool verify_trace(const BoundaryFn& eta, const DnMap& lambda, const TraceProjector& P, double tol) {
    const TraceResidual r = trace_residual(eta, lambda, P);
    return r.conjugate <= tol && r.projection <= tol;
}

bool verify_trace(const BoundaryFn& eta, const DnMap& lambda, double tol) {
    return verify_trace(eta, lambda, projector_P(lambda), tol);
}

HoloTrace beta_hat(const HoloTrace& eta, std::shared_ptr<const DnMap> lambda_prime, const TraceProjector& P_prime,
                   MeanReading reading) {
    const BoundaryFn im = eta.eta.imag_part();
    const double c = reading == MeanReading::Mean ? im.mean().real() : im.integral().real();
    return trace_lift(eta.eta.real_part(), c, std::move(lambda_prime), P_prime);
}

}  // namespace teichstab
