#include "teichstab/boundary_calculus.hpp"

#include <algorithm>
#include <cmath>

namespace teichstab {

BoundaryGrid::BoundaryGrid(int n_samples, double total_length) : n_(n_samples), length_(total_length) {
    if (n_samples < 16 || n_samples % 2 != 0)
        throw Error(ErrorKind::InvalidArgument, "n_samples must be even and >= 16, got " + std::to_string(n_samples));
    if (!(total_length > 0.0) || !std::isfinite(total_length))
        throw Error(ErrorKind::InvalidArgument, "total_length must be positive and finite");
}

bool BoundaryGrid::operator==(const BoundaryGrid& o) const {
    return n_ == o.n_ && std::abs(length_ - o.length_) <= 1e-12 * std::max(1.0, length_);
}

// ---- BoundaryFn -----------------------------------------------------------

BoundaryFn::BoundaryFn(BoundaryGrid grid, std::vector<cplx> values, std::vector<cplx> coeffs)
    : grid_(grid), values_(std::move(values)), coeffs_(std::move(coeffs)) {}

BoundaryFn BoundaryFn::from_values(const BoundaryGrid& grid, std::vector<cplx> values) {
    if (static_cast<int>(values.size()) != grid.n_samples())
        throw Error(ErrorKind::GridMismatch, "sample count does not match grid");
    auto coeffs = spectral::forward(values);
    return {grid, std::move(values), std::move(coeffs)};
}

BoundaryFn BoundaryFn::from_real(const BoundaryGrid& grid, const std::vector<double>& values) {
    return from_values(grid, std::vector<cplx>(values.begin(), values.end()));
}

BoundaryFn BoundaryFn::from_coeffs(const BoundaryGrid& grid, std::vector<cplx> coeffs) {
    if (static_cast<int>(coeffs.size()) != grid.n_samples())
        throw Error(ErrorKind::GridMismatch, "coefficient count does not match grid");
    auto values = spectral::inverse(coeffs);
    return {grid, std::move(values), std::move(coeffs)};
}

BoundaryFn BoundaryFn::sample(const BoundaryGrid& grid, const std::function<cplx(double)>& f) {
    std::vector<cplx> v(grid.n_samples());
    for (int j = 0; j < grid.n_samples(); ++j) v[j] = f(grid.node(j));
    return from_values(grid, std::move(v));
}

BoundaryFn BoundaryFn::constant(const BoundaryGrid& grid, cplx value) {
    std::vector<cplx> c(grid.n_samples(), cplx(0.0));
    c[0] = value;
    return {grid, std::vector<cplx>(grid.n_samples(), value), std::move(c)};
}

cplx BoundaryFn::coeff(int k) const { return coeffs_[spectral::index_of_mode(k, size())]; }

cplx BoundaryFn::eval(double l) const { return spectral::evaluate(coeffs_, kTwoPi * l / grid_.total_length()); }

double BoundaryFn::l2_norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s * grid_.total_length());
}

double BoundaryFn::h1_norm() const {
    const int n = size();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const int k = spectral::mode_of_index(i, n);
        const double w = (k == -n / 2) ? 0.0 : grid_.wavenumber(k);
        s += std::norm(coeffs_[i]) * (1.0 + w * w);
    }
    return std::sqrt(s * grid_.total_length());
}

double BoundaryFn::sup_norm() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

double BoundaryFn::cm_norm(int m) const {
    double out = sup_norm();
    BoundaryFn d = *this;
    for (int k = 1; k <= m; ++k) {
        d = d_gamma(d);
        out = std::max(out, d.sup_norm());
    }
    return out;
}

bool BoundaryFn::is_real(double tol) const {
    const double scale = std::max(1.0, sup_norm());
    for (const auto& v : values_)
        if (std::abs(v.imag()) > tol * scale) return false;
    return true;
}

BoundaryFn BoundaryFn::real_part() const {
    std::vector<cplx> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = values_[j].real();
    return from_values(grid_, std::move(v));
}

BoundaryFn BoundaryFn::imag_part() const {
    std::vector<cplx> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = values_[j].imag();
    return from_values(grid_, std::move(v));
}

BoundaryFn BoundaryFn::conj() const {
    std::vector<cplx> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::conj(values_[j]);
    return from_values(grid_, std::move(v));
}

BoundaryFn BoundaryFn::resampled(int n_samples) const {
    return from_coeffs(grid_.refined(n_samples), spectral::resample_coeffs(coeffs_, n_samples));
}

void BoundaryFn::require_same_grid(const BoundaryFn& o) const {
    if (grid_ != o.grid_) throw Error(ErrorKind::GridMismatch, "boundary functions live on different grids");
}

BoundaryFn BoundaryFn::operator+(const BoundaryFn& o) const {
    require_same_grid(o);
    std::vector<cplx> v(values_.size()), c(coeffs_.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = values_[j] + o.values_[j];
        c[j] = coeffs_[j] + o.coeffs_[j];
    }
    return {grid_, std::move(v), std::move(c)};
}

BoundaryFn BoundaryFn::operator-(const BoundaryFn& o) const { return *this + o * cplx(-1.0); }

BoundaryFn BoundaryFn::operator*(cplx s) const {
    std::vector<cplx> v(values_), c(coeffs_);
    for (auto& x : v) x *= s;
    for (auto& x : c) x *= s;
    return {grid_, std::move(v), std::move(c)};
}

BoundaryFn BoundaryFn::times(const BoundaryFn& o) const {
    require_same_grid(o);
    std::vector<cplx> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = values_[j] * o.values_[j];
    return from_values(grid_, std::move(v));
}

BoundaryFn BoundaryFn::divided_by(const BoundaryFn& o) const {
    require_same_grid(o);
    std::vector<cplx> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = values_[j] / o.values_[j];
    return from_values(grid_, std::move(v));
}

// ---- calculus -------------------------------------------------------------

BoundaryFn d_gamma(const BoundaryFn& f) {
    const int n = f.size();
    const auto& g = f.grid();
    std::vector<cplx> c(n, cplx(0.0));
    for (int i = 0; i < n; ++i) {
        const int k = spectral::mode_of_index(i, n);
        if (k == -n / 2) continue;  // derivative of the cosine Nyquist mode vanishes on the grid
        c[i] = cplx(0.0, g.wavenumber(k)) * f.coeffs()[i];
    }
    return BoundaryFn::from_coeffs(g, std::move(c));
}

double default_mean_tol(const BoundaryFn& f) { return 1e-10 * f.sup_norm(); }

BoundaryFn integrate_J(const BoundaryFn& f, double mean_tol) {
    if (mean_tol < 0.0) mean_tol = default_mean_tol(f);
    if (std::abs(f.mean()) > mean_tol)
        throw Error(ErrorKind::MeanNotZero, "integrate_J: |mean| = " + std::to_string(std::abs(f.mean())));
    const int n = f.size();
    const auto& g = f.grid();
    std::vector<cplx> c(n, cplx(0.0));
    for (int i = 1; i < n; ++i) {
        const int k = spectral::mode_of_index(i, n);
        if (k == -n / 2) continue;
        c[i] = f.coeffs()[i] / cplx(0.0, g.wavenumber(k));
    }
    return BoundaryFn::from_coeffs(g, std::move(c));
}

// ---- basis ----------------------------------------------------------------

Eigen::VectorXd to_basis(const BoundaryFn& f) {
    const auto& g = f.grid();
    const int n = g.n_samples();
    const int kmax = g.max_mode();
    const double L = g.total_length();
    const double s0 = std::sqrt(L), s1 = std::sqrt(2.0 * L);
    Eigen::VectorXd a(g.basis_dim());
    // coefficients of Re f: (c_k + conj(c_-k)) / 2
    auto re_coeff = [&](int k) {
        return 0.5 * (f.coeffs()[spectral::index_of_mode(k, n)] + std::conj(f.coeffs()[spectral::index_of_mode(-k, n)]));
    };
    a(0) = s0 * re_coeff(0).real();
    for (int k = 1; k <= kmax; ++k) {
        const cplx c = re_coeff(k);
        a(cos_index(k)) = s1 * c.real();
        a(sin_index(k)) = -s1 * c.imag();
    }
    return a;
}

BoundaryFn from_basis(const BoundaryGrid& grid, const Eigen::VectorXd& coords) {
    if (coords.size() != grid.basis_dim()) throw Error(ErrorKind::GridMismatch, "basis coordinate length mismatch");
    const int n = grid.n_samples();
    const double L = grid.total_length();
    const double s0 = std::sqrt(L), s1 = std::sqrt(2.0 * L);
    std::vector<cplx> c(n, cplx(0.0));
    c[0] = coords(0) / s0;
    for (int k = 1; k <= grid.max_mode(); ++k) {
        const cplx ck = cplx(coords(cos_index(k)), -coords(sin_index(k))) / s1;
        c[spectral::index_of_mode(k, n)] = ck;
        c[spectral::index_of_mode(-k, n)] = std::conj(ck);
    }
    return BoundaryFn::from_coeffs(grid, std::move(c));
}

double basis_value(const BoundaryGrid& grid, int idx, double l) {
    const double L = grid.total_length();
    if (idx == 0) return 1.0 / std::sqrt(L);
    const int k = mode_of_basis(idx);
    const double arg = grid.wavenumber(k) * l;
    const double s = std::sqrt(2.0 / L);
    return (idx % 2 == 1) ? s * std::cos(arg) : s * std::sin(arg);
}

// ---- operators ------------------------------------------------------------

BoundaryOperator::BoundaryOperator(BoundaryGrid grid, Eigen::MatrixXd matrix, Linearity kind)
    : grid_(grid), matrix_(std::move(matrix)), kind_(kind) {
    const int d = grid_.basis_dim() * (kind_ == Linearity::RealLinear ? 2 : 1);
    if (matrix_.rows() != d || matrix_.cols() != d)
        throw Error(ErrorKind::GridMismatch, "operator matrix has wrong dimension");
}

BoundaryOperator BoundaryOperator::identity(const BoundaryGrid& grid, Linearity kind) {
    const int d = grid.basis_dim() * (kind == Linearity::RealLinear ? 2 : 1);
    return {grid, Eigen::MatrixXd::Identity(d, d), kind};
}

BoundaryOperator BoundaryOperator::zero(const BoundaryGrid& grid, Linearity kind) {
    const int d = grid.basis_dim() * (kind == Linearity::RealLinear ? 2 : 1);
    return {grid, Eigen::MatrixXd::Zero(d, d), kind};
}

BoundaryOperator BoundaryOperator::multiplier(const BoundaryGrid& grid, const std::function<double(int)>& m) {
    const int d = grid.basis_dim();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) a(i, i) = m(mode_of_basis(i));
    return {grid, std::move(a)};
}

BoundaryOperator BoundaryOperator::derivative(const BoundaryGrid& grid) {
    const int d = grid.basis_dim();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (int k = 1; k <= grid.max_mode(); ++k) {
        const double w = grid.wavenumber(k);
        a(sin_index(k), cos_index(k)) = -w;
        a(cos_index(k), sin_index(k)) = w;
    }
    return {grid, std::move(a)};
}

BoundaryOperator BoundaryOperator::integration(const BoundaryGrid& grid) {
    const int d = grid.basis_dim();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (int k = 1; k <= grid.max_mode(); ++k) {
        const double w = grid.wavenumber(k);
        a(sin_index(k), cos_index(k)) = 1.0 / w;
        a(cos_index(k), sin_index(k)) = -1.0 / w;
    }
    return {grid, std::move(a)};
}

BoundaryFn BoundaryOperator::apply(const BoundaryFn& f) const {
    if (f.grid() != grid_) throw Error(ErrorKind::GridMismatch, "operator applied on a foreign grid");
    const Eigen::VectorXd re = to_basis(f.real_part());
    const Eigen::VectorXd im = to_basis(f.imag_part());
    Eigen::VectorXd out_re, out_im;
    if (kind_ == Linearity::ComplexLinear) {
        out_re = matrix_ * re;
        out_im = matrix_ * im;
    } else {
        const int d = grid_.basis_dim();
        Eigen::VectorXd x(2 * d);
        x << re, im;
        const Eigen::VectorXd y = matrix_ * x;
        out_re = y.head(d);
        out_im = y.tail(d);
    }
    return from_basis(grid_, out_re) + from_basis(grid_, out_im) * cplx(0.0, 1.0);
}

BoundaryOperator BoundaryOperator::as_real_linear() const {
    if (kind_ == Linearity::RealLinear) return *this;
    const int d = grid_.basis_dim();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    a.topLeftCorner(d, d) = matrix_;
    a.bottomRightCorner(d, d) = matrix_;
    return {grid_, std::move(a), Linearity::RealLinear};
}

BoundaryOperator BoundaryOperator::operator*(const BoundaryOperator& o) const {
    if (grid_ != o.grid_) throw Error(ErrorKind::GridMismatch, "composition across grids");
    if (kind_ != o.kind_) return as_real_linear() * o.as_real_linear();
    return {grid_, matrix_ * o.matrix_, kind_};
}

BoundaryOperator BoundaryOperator::operator+(const BoundaryOperator& o) const {
    if (grid_ != o.grid_) throw Error(ErrorKind::GridMismatch, "sum across grids");
    if (kind_ != o.kind_) return as_real_linear() + o.as_real_linear();
    return {grid_, matrix_ + o.matrix_, kind_};
}

BoundaryOperator BoundaryOperator::operator-(const BoundaryOperator& o) const { return *this + o * -1.0; }

BoundaryOperator BoundaryOperator::operator*(double s) const { return {grid_, matrix_ * s, kind_}; }

BoundaryOperator BoundaryOperator::restricted(const BoundaryGrid& coarse) const {
    if (std::abs(coarse.total_length() - grid_.total_length()) > 1e-12 * grid_.total_length() ||
        coarse.basis_dim() > grid_.basis_dim())
        throw Error(ErrorKind::GridMismatch, "cannot restrict to a finer or differently sized grid");
    const int dc = coarse.basis_dim();
    if (kind_ == Linearity::ComplexLinear) return {coarse, matrix_.topLeftCorner(dc, dc)};
    const int d = grid_.basis_dim();
    Eigen::MatrixXd a(2 * dc, 2 * dc);
    a.topLeftCorner(dc, dc) = matrix_.block(0, 0, dc, dc);
    a.topRightCorner(dc, dc) = matrix_.block(0, d, dc, dc);
    a.bottomLeftCorner(dc, dc) = matrix_.block(d, 0, dc, dc);
    a.bottomRightCorner(dc, dc) = matrix_.block(d, d, dc, dc);
    return {coarse, std::move(a), Linearity::RealLinear};
}

Eigen::VectorXd sobolev_weights(const BoundaryGrid& grid) {
    Eigen::VectorXd w(grid.basis_dim());
    for (int i = 0; i < w.size(); ++i) {
        const double k = grid.wavenumber(mode_of_basis(i));
        w(i) = 1.0 / std::sqrt(1.0 + k * k);
    }
    return w;
}

double operator_norm_h1_l2(const BoundaryOperator& a) {
    Eigen::VectorXd w = sobolev_weights(a.grid());
    if (a.linearity() == Linearity::RealLinear) {
        Eigen::VectorXd w2(2 * w.size());
        w2 << w, w;
        w = w2;
    }
    const Eigen::MatrixXd aw = a.matrix() * w.asDiagonal();
    if (aw.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    const Eigen::MatrixXd gram = aw.transpose() * aw;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace teichstab
