#pragma once

// Independent reference computations used only by the tests.

#include <functional>
#include <vector>

#include "teichstab/dn_forward.hpp"

namespace oracle {

using teichstab::cplx;

/// Normal derivative of the harmonic extension of f into F(D), by a
/// double-layer Nystrom solve on the parameter circle. Returns values at
/// theta_q = 2 pi q / Q.
std::vector<double> bie_neumann(const teichstab::SurfaceSpec& s, const std::function<double(double)>& f_of_theta, int Q);

/// Arclength of the boundary from F(1) to F(e^{i theta}) by adaptive Simpson.
double arclength(const teichstab::SurfaceSpec& s, double theta);

}  // namespace oracle
