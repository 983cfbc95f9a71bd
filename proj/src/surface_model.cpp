#include "teichstab/surface_model.hpp"

#include <cmath>

namespace teichstab {

MetricJet PatchMetric::jet(const Vec2& x) const {
    const ChebJet j = patch_->eval(x[0], x[1], true);
    MetricJet m;
    m.h.setZero();
    m.dh[0].setZero();
    m.dh[1].setZero();
    for (int k = 0; k < patch_->components(); ++k) {
        const cplx d[2] = {j.f1[k], j.f2[k]};
        const cplx dd[2][2] = {{j.f11[k], j.f12[k]}, {j.f12[k], j.f22[k]}};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                m.h(a, b) += std::real(std::conj(d[a]) * d[b]);
                for (int c = 0; c < 2; ++c) m.dh[c](a, b) += std::real(std::conj(dd[a][c]) * d[b] + std::conj(d[a]) * dd[b][c]);
            }
    }
    return m;
}

SurfaceModel::SurfaceModel(Embedding E, const SurfaceModelOptions& opt) : E_(std::move(E)) {
    if (opt.n_charts < 3) throw Error(ErrorKind::InvalidArgument, "need at least three boundary charts");
    const double L = length();
    const double a = opt.width_frac * L / opt.n_charts;
    const double b = opt.height * L / kTwoPi;
    near_ = 3.0 * separation_floor(E_.grid());
    charts_.reserve(opt.n_charts);
    patches_.reserve(opt.n_charts);
    metrics_.reserve(opt.n_charts);
    for (int c = 0; c < opt.n_charts; ++c) {
        charts_.push_back(rectified_coords(E_, 0, c * L / opt.n_charts, a, b));
        const RectifiedChart& ch = charts_.back();
        patches_.emplace_back(std::array<double, 2>{-a, a}, std::array<double, 2>{0.0, b}, opt.cheb1, opt.cheb2, dim(),
                              [&](double x1, double x2) {
                                  if (dim() == 1) return std::vector<cplx>{ch.from_chart(x1, x2)};
                                  const cplx z = ch.from_chart(x1, x2);
                                  std::vector<cplx> v = contour_distance(E_.eta(0), z) > near_ ? cauchy_eval(E_, 0, z, 0)
                                                                                            : near_boundary_eval(E_, ch, x1, x2, 0);
                                  v[0] = z;
                                  return v;
                              });
    }
    for (int c = 0; c < opt.n_charts; ++c) metrics_.emplace_back(&patches_[c], a, b);
}

int SurfaceModel::chart_for(double l) const {
    const double L = length();
    int best = 0;
    double bd = 1e300;
    for (int c = 0; c < n_charts(); ++c) {
        double d = std::fmod(std::abs(l - charts_[c].base_point()), L);
        d = std::min(d, L - d);
        if (d < bd - 1e-14) {
            bd = d;
            best = c;
        }
    }
    return best;
}

double SurfaceModel::foot_point(cplx z, double* dist) const {
    const BoundaryFn& eta = E_.eta(0);
    const auto& g = eta.grid();
    int best = 0;
    double bd = 1e300;
    for (int j = 0; j < g.n_samples(); ++j) {
        const double d = std::abs(eta.values()[j] - z);
        if (d < bd) {
            bd = d;
            best = j;
        }
    }
    if (dist) *dist = bd;
    return g.node(best);
}

SurfaceModel::Point SurfaceModel::eval(cplx z) const {
    Point p;
    if (dim() == 1) {
        p.xi = {z};
        p.dxi = {1.0};
        return p;
    }
    double d = 0.0;
    const double l = foot_point(z, &d);
    if (d > near_) {
        p.xi = cauchy_eval(E_, 0, z, 0);
        p.dxi = cauchy_eval(E_, 0, z, 1);
        p.xi[0] = z;
        p.dxi[0] = 1.0;
        return p;
    }
    const int c = chart_for(l);
    const auto x = charts_[c].to_chart(z);
    const ChebJet j = patches_[c].eval(x[0], x[1], false);
    const cplx dz = charts_[c].jacobian(x[0], x[1])[0];
    p.xi = j.f;
    p.dxi.resize(dim());
    for (int k = 0; k < dim(); ++k) p.dxi[k] = j.f1[k] / dz;
    p.xi[0] = z;
    p.dxi[0] = 1.0;
    return p;
}

double SurfaceModel::rho(cplx z) const {
    double s = 0.0;
    for (const cplx& d : eval(z).dxi) s += std::norm(d);
    return s;
}

bool SurfaceModel::inside(cplx z) const {
    double d = 0.0;
    const double l = foot_point(z, &d);
    if (d > 1.5 * separation_floor(E_.grid())) return multiplicity(E_.eta(0), z) == 1;
    return charts_[chart_for(l)].to_chart(z)[1] >= 0.0;
}

std::vector<cplx> SurfaceModel::boundary_point(double l) const {
    std::vector<cplx> v(dim());
    for (int k = 0; k < dim(); ++k) v[k] = E_.eta(k).eval(l);
    return v;
}

std::vector<double> metric_in_chart(const Embedding& E, int i, const std::vector<cplx>& z) {
    std::vector<double> out;
    out.reserve(z.size());
    for (const cplx& p : z) {
        double s = 0.0;
        for (const cplx& d : cauchy_eval(E, i, p, 1)) s += std::norm(d);
        if (!(s > 0.0)) throw Error(ErrorKind::DegenerateImmersion, "induced metric vanishes");
        out.push_back(s);
    }
    return out;
}

std::vector<double> metric_in_chart(const Embedding& E, const RectifiedChart& chart, const std::vector<std::array<double, 2>>& x) {
    std::vector<double> out;
    out.reserve(x.size());
    for (const auto& p : x) {
        double s = 0.0;
        for (const cplx& d : near_boundary_eval(E, chart, p[0], p[1], 1)) s += std::norm(d);
        if (!(s > 0.0)) throw Error(ErrorKind::DegenerateImmersion, "induced metric vanishes");
        out.push_back(s);
    }
    return out;
}

}  // namespace teichstab
