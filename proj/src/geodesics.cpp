#include "teichstab/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace teichstab {

MetricJet ConformalMetric::jet(const Vec2& x) const {
    const double r = rho_(x);
    const Vec2 g = grad_(x);
    MetricJet j;
    j.h = r * Mat2::Identity();
    j.dh[0] = g[0] * Mat2::Identity();
    j.dh[1] = g[1] * Mat2::Identity();
    return j;
}

Vec2 inward_normal(const ChartMetric& h, double mu) {
    const Mat2 hinv = h.jet(Vec2(mu, 0.0)).h.inverse();
    // h^{-1} e_2 is h-orthogonal to the tangent e_1 and points into x^2 > 0.
    const Vec2 n = hinv.col(1);
    return n / std::sqrt(hinv(1, 1));
}

namespace {

struct Deriv {
    Vec2 dx, dv;
};

Deriv rhs(const ChartMetric& h, const Vec2& x, const Vec2& v) {
    const MetricJet j = h.jet(x);
    const Mat2 hinv = j.h.inverse();
    // Gamma_{l,jk} = 1/2 (d_j h_lk + d_k h_lj - d_l h_jk)
    Vec2 low = Vec2::Zero();
    for (int l = 0; l < 2; ++l) {
        double s = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) s += (j.dh[a](l, b) + j.dh[b](l, a) - j.dh[l](a, b)) * v[a] * v[b];
        low[l] = 0.5 * s;
    }
    return {v, -(hinv * low)};
}

void check_inside(const ChartMetric& h, const Vec2& x, double mu, double r) {
    const double a = h.half_width(), b = h.height();
    if (!(std::abs(x[0]) < a && x[1] > -1e-12 && x[1] < b)) {
        std::ostringstream os;
        os << "geodesic from mu=" << mu << " leaves the chart at r=" << r;
        throw Error(ErrorKind::ChartExit, os.str());
    }
}

}  // namespace

GeodesicState shoot(const ChartMetric& h, double mu, double r, int n_steps, std::vector<GeodesicState>* path) {
    if (n_steps < 1) throw Error(ErrorKind::InvalidArgument, "n_steps must be positive");
    GeodesicState s{Vec2(mu, 0.0), inward_normal(h, mu)};
    if (path) {
        path->clear();
        path->push_back(s);
    }
    const double dt = r / n_steps;
    for (int k = 0; k < n_steps; ++k) {
        const Deriv k1 = rhs(h, s.x, s.v);
        const Vec2 x2 = s.x + 0.5 * dt * k1.dx, v2 = s.v + 0.5 * dt * k1.dv;
        check_inside(h, x2, mu, (k + 0.5) * dt);
        const Deriv k2 = rhs(h, x2, v2);
        const Vec2 x3 = s.x + 0.5 * dt * k2.dx, v3 = s.v + 0.5 * dt * k2.dv;
        check_inside(h, x3, mu, (k + 0.5) * dt);
        const Deriv k3 = rhs(h, x3, v3);
        const Vec2 x4 = s.x + dt * k3.dx, v4 = s.v + dt * k3.dv;
        check_inside(h, x4, mu, (k + 1) * dt);
        const Deriv k4 = rhs(h, x4, v4);
        s.x += dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
        s.v += dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
        check_inside(h, s.x, mu, (k + 1) * dt);
        if (path) path->push_back(s);
    }
    return s;
}

SemiGeodesicChart shoot_geodesics(const ChartMetric& h, double r_max, const ShootOptions& opt) {
    if (!(r_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "r_max must be positive");
    if (r_max >= h.height()) throw Error(ErrorKind::ChartExit, "r_max exceeds the chart height");
    if (opt.n_mu < 2 || opt.n_r < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 samples per direction");
    const double ext = opt.mu_extent > 0.0 ? opt.mu_extent : 0.5 * h.half_width();
    if (ext + opt.fd_mu >= h.half_width()) throw Error(ErrorKind::InvalidArgument, "mu extent exceeds the chart");

    int n_steps = opt.step > 0.0 ? static_cast<int>(std::ceil(r_max / opt.step - 1e-9)) : 64;
    const int every = (n_steps + opt.n_r - 2) / (opt.n_r - 1);
    n_steps = every * (opt.n_r - 1);

    SemiGeodesicChart out;
    out.r0 = r_max;
    for (int j = 0; j < opt.n_r; ++j) out.r.push_back(r_max * j / (opt.n_r - 1));
    std::vector<GeodesicState> p0, pm, pp;
    for (int i = 0; i < opt.n_mu; ++i) {
        const double mu = -ext + 2.0 * ext * i / (opt.n_mu - 1);
        out.mu.push_back(mu);
        shoot(h, mu, r_max, n_steps, &p0);
        shoot(h, mu - opt.fd_mu, r_max, n_steps, &pm);
        shoot(h, mu + opt.fd_mu, r_max, n_steps, &pp);
        double det0 = 0.0;
        std::vector<Vec2> row;
        for (int k = 0; k <= n_steps; ++k) {
            const Vec2 dmu = (pp[k].x - pm[k].x) / (2.0 * opt.fd_mu);
            const Vec2 v = p0[k].v;
            const double det = dmu[0] * v[1] - dmu[1] * v[0];
            if (k == 0) det0 = det;
            const double ratio = det / det0;
            if (!(det > 0.0) || ratio < opt.caustic_ratio) {
                std::ostringstream os;
                os << "bundle Jacobian degenerates at mu=" << mu << ", r=" << r_max * k / n_steps;
                throw Error(ErrorKind::CausticDetected, os.str());
            }
            out.min_jacobian_ratio = std::min(out.min_jacobian_ratio, ratio);
            const double speed = std::sqrt(v.dot(h.jet(p0[k].x).h * v));
            out.max_speed_defect = std::max(out.max_speed_defect, std::abs(speed - 1.0));
            if (k % every == 0) row.push_back(p0[k].x);
        }
        out.x.push_back(std::move(row));
    }
    return out;
}

double bundle_c1_distance(const SemiGeodesicChart& a, const SemiGeodesicChart& b) {
    if (a.mu.size() != b.mu.size() || a.r.size() != b.r.size()) throw Error(ErrorKind::GridMismatch, "bundles sampled on different grids");
    const int nm = static_cast<int>(a.mu.size()), nr = static_cast<int>(a.r.size());
    auto diff = [&](int i, int j) { return Vec2(a.x[i][j] - b.x[i][j]); };
    double d = 0.0;
    for (int i = 0; i < nm; ++i)
        for (int j = 0; j < nr; ++j) {
            d = std::max(d, diff(i, j).norm());
            // one-sided at the ends, central inside
            const int i0 = std::max(i - 1, 0), i1 = std::min(i + 1, nm - 1);
            const int j0 = std::max(j - 1, 0), j1 = std::min(j + 1, nr - 1);
            const Vec2 dmu = (diff(i1, j) - diff(i0, j)) / (a.mu[i1] - a.mu[i0]);
            const Vec2 dr = (diff(i, j1) - diff(i, j0)) / (a.r[j1] - a.r[j0]);
            d = std::max({d, dmu.norm(), dr.norm()});
        }
    return d;
}

GeodesicPatch::GeodesicPatch(const ChartMetric& h, double mu_ext, double r_max, int n_mu, int n_r)
    : mu_ext_(mu_ext), r_max_(r_max) {
    if (!(mu_ext > 0.0) || !(r_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "empty geodesic table");
    n0_ = inward_normal(h, 0.0);
    patch_ = ChebyshevPatch({-mu_ext, mu_ext}, {0.0, r_max}, n_mu, n_r, 1, [&](double mu, double r) {
        const Vec2 x = r > 0.0 ? shoot(h, mu, r, 64).x : Vec2(mu, 0.0);
        return std::vector<cplx>{cplx(x[0], x[1])};
    });
    double det0 = -1.0;
    for (double mu : ChebyshevPatch::nodes(n_mu, -mu_ext, mu_ext))
        for (double r : ChebyshevPatch::nodes(n_r, 0.0, r_max)) {
            const double det = jacobian(mu, r).determinant();
            if (det0 < 0.0) det0 = jacobian(mu, 0.0).determinant();
            if (!(det > 1e-3 * det0)) {
                std::ostringstream os;
                os << "geodesic table degenerates at mu=" << mu << ", r=" << r;
                throw Error(ErrorKind::CausticDetected, os.str());
            }
        }
}

Vec2 GeodesicPatch::x(double mu, double r) const {
    const cplx v = patch_.eval(mu, r, false).f[0];
    return {v.real(), v.imag()};
}

Mat2 GeodesicPatch::jacobian(double mu, double r) const {
    const auto j = patch_.eval(mu, r, false);
    Mat2 m;
    m << j.f1[0].real(), j.f2[0].real(), j.f1[0].imag(), j.f2[0].imag();
    return m;
}

bool GeodesicPatch::invert(const Vec2& target, double& mu, double& r) const {
    r = target[1] / n0_[1];
    mu = target[0] - r * n0_[0];
    for (int it = 0; it < 40; ++it) {
        const auto j = patch_.eval(mu, r, false);
        const Vec2 res(j.f[0].real() - target[0], j.f[0].imag() - target[1]);
        Mat2 J;
        J << j.f1[0].real(), j.f2[0].real(), j.f1[0].imag(), j.f2[0].imag();
        const Vec2 d = J.inverse() * res;
        mu -= d[0];
        r -= d[1];
        if (std::abs(mu) > 1.5 * mu_ext_ || r > 1.5 * r_max_ || r < -0.5 * r_max_) return false;
        if (d.norm() <= 1e-15 * (1.0 + std::abs(mu) + std::abs(r))) break;
        if (it == 39 && d.norm() > 1e-12) return false;
    }
    return std::abs(mu) <= 1.05 * mu_ext_ && r <= r_max_ * (1.0 + 1e-9);
}

}  // namespace teichstab
