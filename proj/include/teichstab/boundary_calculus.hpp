#pragma once

// Spectral calculus on the common boundary curve: uniformly sampled periodic
// functions of arclength, tangential differentiation and integration, and a
// dense operator algebra over the truncated real trigonometric basis.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "teichstab/errors.hpp"
#include "teichstab/spectral.hpp"

namespace teichstab {

/// Uniform arclength grid l_j = j L / n on a closed curve of length L.
class BoundaryGrid {
public:
    BoundaryGrid(int n_samples, double total_length);

    int n_samples() const { return n_; }
    double total_length() const { return length_; }
    double spacing() const { return length_ / n_; }
    double node(int j) const { return j * spacing(); }
    /// Highest mode kept by boundary operators, K = n/2 - 1.
    int max_mode() const { return n_ / 2 - 1; }
    /// Dimension 2K+1 of the truncated real trigonometric basis.
    int basis_dim() const { return 2 * max_mode() + 1; }
    /// Angular frequency 2 pi k / L of mode k.
    double wavenumber(int k) const { return kTwoPi * k / length_; }

    /// Same length, different sample count.
    BoundaryGrid refined(int n_samples) const { return {n_samples, length_}; }

    bool operator==(const BoundaryGrid& o) const;
    bool operator!=(const BoundaryGrid& o) const { return !(*this == o); }

private:
    int n_;
    double length_;
};

/// A smooth periodic function on the boundary, held both as samples and as
/// FFT-ordered Fourier coefficients (mode k multiplies exp(2 pi i k l / L)).
class BoundaryFn {
public:
    static BoundaryFn from_values(const BoundaryGrid& grid, std::vector<cplx> values);
    static BoundaryFn from_real(const BoundaryGrid& grid, const std::vector<double>& values);
    static BoundaryFn from_coeffs(const BoundaryGrid& grid, std::vector<cplx> coeffs);
    static BoundaryFn sample(const BoundaryGrid& grid, const std::function<cplx(double)>& f);
    static BoundaryFn constant(const BoundaryGrid& grid, cplx value);

    const BoundaryGrid& grid() const { return grid_; }
    int size() const { return grid_.n_samples(); }
    const std::vector<cplx>& values() const { return values_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    cplx value(int j) const { return values_[j]; }
    /// Coefficient of signed mode k in [-n/2, n/2).
    cplx coeff(int k) const;

    /// Trigonometric interpolant at arbitrary arclength.
    cplx eval(double l) const;

    /// Normalized mean (1/L) integral f dl, equal to the n = 0 coefficient.
    cplx mean() const { return coeffs_[0]; }
    /// Unnormalized integral of f dl.
    cplx integral() const { return coeffs_[0] * grid_.total_length(); }

    double l2_norm() const;
    double h1_norm() const;
    double sup_norm() const;
    /// max over k <= m of the sup of the k-th tangential derivative on the grid.
    double cm_norm(int m) const;
    bool is_real(double tol = 0.0) const;

    BoundaryFn real_part() const;
    BoundaryFn imag_part() const;
    BoundaryFn conj() const;
    /// Same function resampled on a grid with a different sample count.
    BoundaryFn resampled(int n_samples) const;

    BoundaryFn operator+(const BoundaryFn& o) const;
    BoundaryFn operator-(const BoundaryFn& o) const;
    BoundaryFn operator*(cplx s) const;
    BoundaryFn operator-() const { return *this * cplx(-1.0); }
    /// Pointwise product and quotient of samples.
    BoundaryFn times(const BoundaryFn& o) const;
    BoundaryFn divided_by(const BoundaryFn& o) const;

private:
    BoundaryFn(BoundaryGrid grid, std::vector<cplx> values, std::vector<cplx> coeffs);
    void require_same_grid(const BoundaryFn& o) const;

    BoundaryGrid grid_;
    std::vector<cplx> values_;
    std::vector<cplx> coeffs_;
};

inline BoundaryFn operator*(cplx s, const BoundaryFn& f) { return f * s; }

/// Tangential derivative, exact on the retained spectrum (Nyquist mode dropped).
BoundaryFn d_gamma(const BoundaryFn& f);

/// Default admissibility threshold 1e-10 * ||f||_inf for |mean(f)|.
double default_mean_tol(const BoundaryFn& f);

/// Mean-zero antiderivative. Throws MeanNotZero when |mean(f)| > mean_tol;
/// a negative tolerance selects `default_mean_tol`.
BoundaryFn integrate_J(const BoundaryFn& f, double mean_tol = -1.0);

// ---------------------------------------------------------------------------
// Truncated real trigonometric basis
// ---------------------------------------------------------------------------
//
// Coordinates are taken against the L2(dl)-orthonormal basis
//   [1/sqrt(L), sqrt(2/L) cos(w_1 l), sqrt(2/L) sin(w_1 l), ..., cos/sin(w_K l)]
// so matrix transposes are L2 adjoints.

/// Basis index of cos(w_k l) (k >= 1); the sine partner follows it.
inline int cos_index(int k) { return 2 * k - 1; }
inline int sin_index(int k) { return 2 * k; }
/// Mode number carried by basis index `idx`.
inline int mode_of_basis(int idx) { return (idx + 1) / 2; }

/// Coordinates of the real part of f.
Eigen::VectorXd to_basis(const BoundaryFn& f);
/// Real function with the given coordinates.
BoundaryFn from_basis(const BoundaryGrid& grid, const Eigen::VectorXd& coords);
/// Value of basis function `idx` at arclength l.
double basis_value(const BoundaryGrid& grid, int idx, double l);

enum class Linearity { ComplexLinear, RealLinear };

/// Dense operator on the truncated basis. A complex-linear operator is a real
/// matrix acting on real and imaginary parts alike; a real-linear one is a
/// 2x2 block matrix over the stacked (Re, Im) coordinates.
class BoundaryOperator {
public:
    BoundaryOperator(BoundaryGrid grid, Eigen::MatrixXd matrix, Linearity kind = Linearity::ComplexLinear);

    static BoundaryOperator identity(const BoundaryGrid& grid, Linearity kind = Linearity::ComplexLinear);
    static BoundaryOperator zero(const BoundaryGrid& grid, Linearity kind = Linearity::ComplexLinear);
    /// Acts on cos/sin of mode k by the same real factor multiplier(k).
    static BoundaryOperator multiplier(const BoundaryGrid& grid, const std::function<double(int)>& multiplier);
    /// Tangential derivative as a matrix.
    static BoundaryOperator derivative(const BoundaryGrid& grid);
    /// J, extended by zero on constants.
    static BoundaryOperator integration(const BoundaryGrid& grid);

    const BoundaryGrid& grid() const { return grid_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    Linearity linearity() const { return kind_; }

    BoundaryFn apply(const BoundaryFn& f) const;

    BoundaryOperator operator*(const BoundaryOperator& o) const;
    BoundaryOperator operator+(const BoundaryOperator& o) const;
    BoundaryOperator operator-(const BoundaryOperator& o) const;
    BoundaryOperator operator*(double s) const;

    /// The same operator written as a 2x2 block real-linear matrix.
    BoundaryOperator as_real_linear() const;
    /// Leading block on a coarser grid with the same length.
    BoundaryOperator restricted(const BoundaryGrid& coarse) const;

private:
    BoundaryGrid grid_;
    Eigen::MatrixXd matrix_;
    Linearity kind_;
};

/// Diagonal H1 -> L2 Sobolev weights (1 + w_k^2)^(-1/2) per basis index.
Eigen::VectorXd sobolev_weights(const BoundaryGrid& grid);

/// Largest singular value of A W: the truncated H1 -> L2 operator norm.
double operator_norm_h1_l2(const BoundaryOperator& a);

}  // namespace teichstab
