#pragma once

// Traces of holomorphic functions: the projector P, the lift
// f, c -> Pf + i(J Lambda P f + c), the membership test and the transfer map
// beta_hat onto the traces of another surface.

#include <memory>

#include "teichstab/dn_forward.hpp"

namespace teichstab {

struct TraceProjector {
    BoundaryOperator P;
    int codim = 0;
    Eigen::VectorXd singular_values;  // of I + (Lambda J)^2 on mean-zero modes, descending
    double threshold = 0.0;
};

/// Orthogonal projector onto Ker[I + (Lambda J)^2]^* + constants, in L2(dl).
/// Singular values below rank_tol * max(1, sigma_max) count as null.
TraceProjector projector_P(const DnMap& lambda, double rank_tol = 1e-6);

struct HoloTrace {
    BoundaryFn eta;
    std::shared_ptr<const DnMap> source;
};

/// J Lambda applied to a real function.
BoundaryFn j_lambda(const DnMap& lambda, const BoundaryFn& f);

HoloTrace trace_lift(const BoundaryFn& f, double c, std::shared_ptr<const DnMap> lambda, const TraceProjector& P);

struct TraceResidual {
    double conjugate;   // ||Im eta - J Lambda P Re eta - mean Im eta|| / ||eta||_H1
    double projection;  // ||(I - P) Re eta|| / ||eta||
};
TraceResidual trace_residual(const BoundaryFn& eta, const DnMap& lambda, const TraceProjector& P);

bool verify_trace(const BoundaryFn& eta, const DnMap& lambda, const TraceProjector& P, double tol);
bool verify_trace(const BoundaryFn& eta, const DnMap& lambda, double tol);

enum class MeanReading { Mean, Integral };

/// P' Re eta + i(J Lambda' P' Re eta + <Im eta>). The bracket is the mean
/// value by default; MeanReading::Integral uses the unnormalized integral.
HoloTrace beta_hat(const HoloTrace& eta, std::shared_ptr<const DnMap> lambda_prime, const TraceProjector& P_prime,
                   MeanReading reading = MeanReading::Mean);

}  // namespace teichstab
