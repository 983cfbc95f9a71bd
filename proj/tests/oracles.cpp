#include "oracles.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace oracle {

using teichstab::kTwoPi;
using teichstab::kPi;

std::vector<double> bie_neumann(const teichstab::SurfaceSpec& s, const std::function<double(double)>& f_of_theta, int Q) {
    const double h = kTwoPi / Q;
    std::vector<cplx> z(Q), dz(Q), d2z(Q);
    for (int q = 0; q < Q; ++q) {
        const cplx e = std::polar(1.0, q * h);
        z[q] = s.F(e);
        dz[q] = s.dF(e) * cplx(0.0, 1.0) * e;
        d2z[q] = s.d2F(e) * (cplx(0.0, 1.0) * e) * (cplx(0.0, 1.0) * e) - s.dF(e) * e;
    }
    // (1/2 + K) mu = f with K(t0, t) = Re[z'(t) / (2 pi i (z(t) - z(t0)))]
    Eigen::MatrixXd a(Q, Q);
    Eigen::VectorXd rhs(Q);
    const cplx two_pi_i(0.0, kTwoPi);
    for (int p = 0; p < Q; ++p) {
        rhs(p) = f_of_theta(p * h);
        for (int q = 0; q < Q; ++q) {
            const cplx k = (p == q) ? d2z[p] / (2.0 * two_pi_i * dz[p]) : dz[q] / (two_pi_i * (z[q] - z[p]));
            a(p, q) = k.real() * h + (p == q ? 0.5 : 0.0);
        }
    }
    const Eigen::VectorXd mu = a.partialPivLu().solve(rhs);

    Eigen::FFT<double> fft;
    std::vector<cplx> muc(mu.data(), mu.data() + Q), c, dmu;
    fft.fwd(c, muc);
    for (int k = 0; k < Q; ++k) {
        const int m = k < Q / 2 ? k : k - Q;
        c[k] *= (k == Q / 2) ? cplx(0.0) : cplx(0.0, m);
    }
    fft.inv(dmu, c);

    // boundary value of the Cauchy integral with the principal value subtracted
    std::vector<double> v(Q);
    for (int p = 0; p < Q; ++p) {
        cplx acc = dmu[p].real() * h + cplx(0.0, kPi) * mu(p);
        for (int q = 0; q < Q; ++q)
            if (q != p) acc += (mu(q) - mu(p)) * dz[q] / (z[q] - z[p]) * h;
        v[p] = (0.5 * mu(p) + acc / two_pi_i).imag();
    }
    // d_nu u = d_s v
    std::vector<cplx> vc(v.begin(), v.end()), dv;
    fft.fwd(c, vc);
    for (int k = 0; k < Q; ++k) {
        const int m = k < Q / 2 ? k : k - Q;
        c[k] *= (k == Q / 2) ? cplx(0.0) : cplx(0.0, m);
    }
    fft.inv(dv, c);
    std::vector<double> out(Q);
    for (int q = 0; q < Q; ++q) out[q] = dv[q].real() / std::abs(dz[q]);
    return out;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 1e-14) return left + right + (left + right - whole) / 15;
    return simpson(f, a, m, fa, flm, fm, left, depth - 1) + simpson(f, m, b, fm, frm, fb, right, depth - 1);
}

}  // namespace

double arclength(const teichstab::SurfaceSpec& s, double theta) {
    auto speed = [&](double t) { return std::abs(s.dF(std::polar(1.0, t))); };
    const double fa = speed(0), fb = speed(theta), fm = speed(theta / 2);
    return simpson(speed, 0.0, theta, fa, fm, fb, theta / 6 * (fa + 4 * fm + fb), 40);
}

}  // namespace oracle
