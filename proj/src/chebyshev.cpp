#include "teichstab/chebyshev.hpp"

#include <cmath>

#include "teichstab/errors.hpp"

namespace teichstab {

namespace {

// T_k, T_k', T_k'' at t in [-1, 1] by the three-term recurrences.
void cheb_basis(int n, double t, double* T, double* dT, double* d2T) {
    T[0] = 1.0;
    dT[0] = 0.0;
    d2T[0] = 0.0;
    if (n == 1) return;
    T[1] = t;
    dT[1] = 1.0;
    d2T[1] = 0.0;
    for (int k = 2; k < n; ++k) {
        T[k] = 2.0 * t * T[k - 1] - T[k - 2];
        dT[k] = 2.0 * T[k - 1] + 2.0 * t * dT[k - 1] - dT[k - 2];
        d2T[k] = 4.0 * dT[k - 1] + 2.0 * t * d2T[k - 1] - d2T[k - 2];
    }
}

// Coefficients of the interpolant through values at cos(pi j / (n-1)).
std::vector<double> cheb_matrix(int n) {
    std::vector<double> m(n * n);
    const int N = n - 1;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            double w = (j == 0 || j == N) ? 0.5 : 1.0;
            double c = 2.0 / N * w * std::cos(kPi * k * j / N);
            if (k == 0 || k == N) c *= 0.5;
            m[k * n + j] = c;
        }
    return m;
}

}  // namespace

std::vector<double> ChebyshevPatch::nodes(int n, double a, double b) {
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(kPi * j / (n - 1));
    return x;
}

ChebyshevPatch::ChebyshevPatch(std::array<double, 2> range1, std::array<double, 2> range2, int n1, int n2, int n_out,
                               const std::function<std::vector<cplx>(double, double)>& fn)
    : r1_(range1), r2_(range2), n1_(n1), n2_(n2), n_out_(n_out) {
    if (n1 < 2 || n2 < 2 || n_out < 1) throw Error(ErrorKind::InvalidArgument, "Chebyshev patch needs >= 2 nodes per direction");
    const auto x1 = nodes(n1, r1_[0], r1_[1]);
    const auto x2 = nodes(n2, r2_[0], r2_[1]);
    std::vector<cplx> vals(static_cast<std::size_t>(n_out) * n1 * n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const auto v = fn(x1[i], x2[j]);
            if (static_cast<int>(v.size()) != n_out) throw Error(ErrorKind::InvalidArgument, "sampled function has wrong arity");
            for (int o = 0; o < n_out; ++o) vals[(o * n1 + i) * n2 + j] = v[o];
        }
    const auto m1 = cheb_matrix(n1), m2 = cheb_matrix(n2);
    coef_.assign(vals.size(), cplx(0.0));
    std::vector<cplx> tmp(static_cast<std::size_t>(n1) * n2);
    for (int o = 0; o < n_out; ++o) {
        const cplx* v = &vals[static_cast<std::size_t>(o) * n1 * n2];
        for (int k = 0; k < n1; ++k)
            for (int j = 0; j < n2; ++j) {
                cplx s(0.0);
                for (int i = 0; i < n1; ++i) s += m1[k * n1 + i] * v[i * n2 + j];
                tmp[k * n2 + j] = s;
            }
        cplx* c = &coef_[static_cast<std::size_t>(o) * n1 * n2];
        for (int k = 0; k < n1; ++k)
            for (int l = 0; l < n2; ++l) {
                cplx s(0.0);
                for (int j = 0; j < n2; ++j) s += m2[l * n2 + j] * tmp[k * n2 + j];
                c[k * n2 + l] = s;
            }
    }
}

ChebJet ChebyshevPatch::eval(double x1, double x2, bool second) const {
    const double s1 = 2.0 / (r1_[1] - r1_[0]), s2 = 2.0 / (r2_[1] - r2_[0]);
    const double t1 = (x1 - 0.5 * (r1_[0] + r1_[1])) * s1;
    const double t2 = (x2 - 0.5 * (r2_[0] + r2_[1])) * s2;
    std::vector<double> T1(n1_), dT1(n1_), ddT1(n1_), T2(n2_), dT2(n2_), ddT2(n2_);
    cheb_basis(n1_, t1, T1.data(), dT1.data(), ddT1.data());
    cheb_basis(n2_, t2, T2.data(), dT2.data(), ddT2.data());
    ChebJet out;
    out.f.resize(n_out_);
    out.f1.resize(n_out_);
    out.f2.resize(n_out_);
    if (second) {
        out.f11.resize(n_out_);
        out.f12.resize(n_out_);
        out.f22.resize(n_out_);
    }
    for (int o = 0; o < n_out_; ++o) {
        const cplx* c = &coef_[static_cast<std::size_t>(o) * n1_ * n2_];
        cplx f(0.0), f1(0.0), f2(0.0), f11(0.0), f12(0.0), f22(0.0);
        for (int k = 0; k < n1_; ++k) {
            cplx a(0.0), b(0.0), d(0.0);
            for (int l = 0; l < n2_; ++l) {
                const cplx ck = c[k * n2_ + l];
                a += ck * T2[l];
                b += ck * dT2[l];
                if (second) d += ck * ddT2[l];
            }
            f += a * T1[k];
            f1 += a * dT1[k];
            f2 += b * T1[k];
            if (second) {
                f11 += a * ddT1[k];
                f12 += b * dT1[k];
                f22 += d * T1[k];
            }
        }
        out.f[o] = f;
        out.f1[o] = f1 * s1;
        out.f2[o] = f2 * s2;
        if (second) {
            out.f11[o] = f11 * s1 * s1;
            out.f12[o] = f12 * s1 * s2;
            out.f22[o] = f22 * s2 * s2;
        }
    }
    return out;
}

}  // namespace teichstab
