#pragma once

// DN maps of genus-0 test surfaces M = F(D), F a polynomial immersion of the
// closed unit disc, with the boundary parametrized by arclength.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "teichstab/boundary_calculus.hpp"

namespace teichstab {

struct SurfaceSpec {
    std::vector<cplx> series;  // a_1, a_2, ... of F(z) = sum a_k z^k
    BoundaryGrid grid{256, kTwoPi};
    double base_offset = 0.0;  // arclength of F(1) in the common boundary coordinate

    cplx F(cplx z) const;
    cplx dF(cplx z) const;
    cplx d2F(cplx z) const;

    static SurfaceSpec from_json_text(const std::string& text);
    std::string to_json_text() const;
};

/// Perimeter of F(unit circle), computed by trapezoidal quadrature.
double boundary_length(const SurfaceSpec& s);

/// Throws DegenerateImmersion or NotInjective when F is not an injective
/// immersion of the closed disc.
void validate_surface(const SurfaceSpec& s);

/// Rescales F by a positive constant so the boundary length equals target_L.
SurfaceSpec normalize_length(const SurfaceSpec& s, double target_L);

/// Boundary correspondence l(theta) = int_0^theta |F'(e^is)| ds.
class ArclengthMap {
public:
    explicit ArclengthMap(const SurfaceSpec& s, int n_theta = 0);

    double length() const { return length_; }
    double l_of_theta(double theta) const;
    /// Newton inverse of the monotone map, tolerance 1e-12 in theta.
    double theta_of_l(double l) const;

private:
    std::vector<cplx> coeffs_;  // periodic part of l(theta) - length theta / 2pi
    double length_;
    std::vector<double> speed_;
    std::vector<cplx> speed_coeffs_;
};

/// Trace of g(F^-1(.)) on the boundary grid: g is a function on the disc.
BoundaryFn boundary_trace(const SurfaceSpec& s, const std::function<cplx(cplx)>& g_of_disc_point);

/// The DN operator. `op` lives on the working grid; `guard` is the same
/// operator on a grid of twice the size, used where compositions would
/// otherwise lose the modes just above the truncation.
class DnMap {
public:
    DnMap(BoundaryOperator op, BoundaryOperator guard);
    /// Synthetic operator acting by m(k) on mode k (both resolutions).
    static DnMap multiplier(const BoundaryGrid& grid, const std::function<double(int)>& m);

    const BoundaryOperator& op() const { return op_; }
    const BoundaryOperator& guard() const { return guard_; }
    const BoundaryGrid& grid() const { return op_.grid(); }

    BoundaryFn apply(const BoundaryFn& f) const { return op_.apply(f); }

private:
    BoundaryOperator op_;
    BoundaryOperator guard_;
};

struct DnDiagnostics {
    double constant_residual;  // ||Lambda 1|| / ||Lambda||
    double asymmetry;          // ||A - A^T|| / ||A||
    double min_rayleigh;       // min_j <Lambda phi_j, phi_j> / ||Lambda||
};
DnDiagnostics dn_diagnostics(const DnMap& m);

/// Multiplier |n| on the disc; requires L = 2 pi.
DnMap disc_dn(const BoundaryGrid& grid);

struct PushforwardOptions {
    int oversample = 4;  // theta quadrature points per basis function of the guard grid
};

/// Lambda_M for a length-normalized surface.
DnMap pushforward_dn(const SurfaceSpec& s, const PushforwardOptions& opt = {});

/// Truncated H1 -> L2 norm of the difference.
double dn_distance(const DnMap& a, const DnMap& b);

}  // namespace teichstab
