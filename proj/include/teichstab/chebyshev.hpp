#pragma once

// Tensor Chebyshev interpolation of complex vector fields on a rectangle.

#include <array>
#include <functional>
#include <vector>

#include "teichstab/spectral.hpp"

namespace teichstab {

/// Value and partial derivatives of each component at one point.
struct ChebJet {
    std::vector<cplx> f, f1, f2, f11, f12, f22;
};

class ChebyshevPatch {
public:
    ChebyshevPatch() = default;
    /// Samples `fn` (returning `n_out` components) at the n1 x n2 Chebyshev
    /// extreme points of [x1a, x1b] x [x2a, x2b].
    ChebyshevPatch(std::array<double, 2> range1, std::array<double, 2> range2, int n1, int n2, int n_out,
                   const std::function<std::vector<cplx>(double, double)>& fn);

    int components() const { return n_out_; }
    ChebJet eval(double x1, double x2, bool second = true) const;
    /// Chebyshev points used in one direction.
    static std::vector<double> nodes(int n, double a, double b);

private:
    std::array<double, 2> r1_{}, r2_{};
    int n1_ = 0, n2_ = 0, n_out_ = 0;
    std::vector<cplx> coef_;  // [out][i][j]
};

}  // namespace teichstab
