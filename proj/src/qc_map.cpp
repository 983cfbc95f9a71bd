#include "teichstab/qc_map.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

namespace teichstab {

double teich_bound(double K) {
    if (!(K >= 1.0)) throw Error(ErrorKind::InvalidDilatation, "dilatation below 1");
    return 0.5 * std::log(K);
}

namespace {

double dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
    return std::sqrt(s);
}

double directed(const std::vector<std::vector<cplx>>& A, const std::vector<std::vector<cplx>>& B) {
    double sup = 0.0;
    for (const auto& a : A) {
        double inf = 1e300;
        for (const auto& b : B) inf = std::min(inf, dist(a, b));
        sup = std::max(sup, inf);
    }
    return sup;
}

}  // namespace

double hausdorff_distance(const std::vector<std::vector<cplx>>& A, const std::vector<std::vector<cplx>>& B) {
    if (A.empty() || B.empty()) throw Error(ErrorKind::EmptyCloud, "Hausdorff distance of an empty cloud");
    return std::max(directed(A, B), directed(B, A));
}

BeltramiResult beltrami_dilatation(const std::function<cplx(cplx, int)>& q, const std::vector<cplx>& probes, double step) {
    BeltramiResult res;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const cplx z = probes[i];
        const int id = static_cast<int>(i);
        const cplx qx = (q(z + step, id) - q(z - step, id)) / (2.0 * step);
        const cplx qy = (q(z + cplx(0, step), id) - q(z - cplx(0, step), id)) / (2.0 * step);
        const cplx dz = 0.5 * (qx - cplx(0, 1) * qy);
        const cplx dzb = 0.5 * (qx + cplx(0, 1) * qy);
        const cplx mu = dzb / dz;
        if (!(std::abs(mu) < 1.0)) {
            std::ostringstream os;
            os << "|mu| = " << std::abs(mu) << " at z = " << z;
            throw Error(ErrorKind::OrientationViolated, os.str());
        }
        const double k = (1.0 + std::abs(mu)) / (1.0 - std::abs(mu));
        res.mu.push_back(mu);
        res.k.push_back(k);
        res.K = std::max(res.K, k);
    }
    return res;
}

BeltramiResult beltrami_dilatation(const std::function<cplx(cplx)>& q, const std::vector<cplx>& probes, double step) {
    return beltrami_dilatation([&](cplx z, int) { return q(z); }, probes, step);
}

double kappa_profile(double r, double r0) {
    const double s = std::clamp((2.0 * r0 / 3.0 - r) / (r0 / 3.0), 0.0, 1.0);
    return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

// ---- alpha -----------------------------------------------------------------

namespace {

double mu_extent(const SurfaceModel& M) { return 0.75 * M.chart(0).half_width(); }

}  // namespace

AlphaMap::AlphaMap(std::shared_ptr<const SurfaceModel> M, std::shared_ptr<const SurfaceModel> Mp, double r0, const AlphaOptions& opt)
    : M_(std::move(M)), Mp_(std::move(Mp)), r0_(r0), opt_(opt) {
    if (M_->n_charts() != Mp_->n_charts() || std::abs(M_->length() - Mp_->length()) > 1e-9)
        throw Error(ErrorKind::GridMismatch, "surfaces carry different chart rings");
    for (int c = 0; c < M_->n_charts(); ++c) {
        geo_.emplace_back(M_->chart_metric(c), mu_extent(*M_), r0_, opt_.geo_mu, opt_.geo_r);
        geo_p_.emplace_back(Mp_->chart_metric(c), mu_extent(*Mp_), r0_, opt_.geo_mu, opt_.geo_r);
    }
}

double AlphaMap::unwrap(int c, double l) const {
    const double L = M_->length(), l0 = M_->chart(c).base_point();
    double d = std::fmod(l - l0, L);
    if (d > L / 2) d -= L;
    if (d <= -L / 2) d += L;
    return l0 + d;
}

AlphaMap::Location AlphaMap::locate(cplx z, int hint) const {
    Location loc;
    double d = 0.0;
    loc.l = M_->foot_point(z, &d);
    loc.chart = hint >= 0 ? hint : M_->chart_for(loc.l);
    const RectifiedChart& ch = M_->chart(loc.chart);
    if (hint < 0 && d > 2.0 * ch.height()) return loc;
    const auto x = ch.to_chart(z);
    if (!ch.contains(x[0], x[1], 1e-9)) return loc;
    double mu = 0.0, r = 0.0;
    if (!geo_[loc.chart].invert(Vec2(x[0], x[1]), mu, r)) return loc;
    loc.l = ch.l_tilde_inv(mu);
    loc.r = r;
    return loc;
}

cplx AlphaMap::from_lr(bool target, int c, double l, double r) const {
    const SurfaceModel& S = target ? *Mp_ : *M_;
    const RectifiedChart& ch = S.chart(c);
    const Vec2 x = (target ? geo_p_ : geo_)[c].x(ch.l_tilde(unwrap(c, l)), r);
    return ch.from_chart(x[0], x[1]);
}

cplx AlphaMap::strip_map(int c, double l, double r) const { return from_lr(true, c, l, r); }

bool AlphaMap::locate_target(int c, const Vec2& x, double& l, double& r, Mat2* dlr) const {
    const RectifiedChart& ch = Mp_->chart(c);
    double mu = 0.0;
    if (!geo_p_[c].invert(x, mu, r)) return false;
    l = ch.l_tilde_inv(mu);
    if (dlr) {
        const Mat2 Jinv = geo_p_[c].jacobian(mu, r).inverse();
        const double dl_dmu = 1.0 / std::real(ch.deta(l) / ch.d0());
        *dlr = Jinv;
        dlr->row(0) *= dl_dmu;
    }
    return true;
}

cplx AlphaMap::eval_impl(cplx z, int hint, double* ratio) const {
    const Location loc = locate(z, hint);
    const double kap = kappa_profile(loc.r, r0_);
    if (ratio) *ratio = 0.0;
    if (kap >= 1.0) return strip_map(loc.chart, loc.l, loc.r);

    const std::vector<cplx> xi = M_->eval(z).xi;
    const int n = M_->dim();
    ContractionStats st;
    try {
        if (kap <= 0.0) {
            // interior: nearest point of E'(M') to xi in the global coordinate
            if (!Mp_->inside(z)) throw Error(ErrorKind::MinimizationDiverged, "interior seed outside the target surface");
            if (n == 1) return z;
            auto grad = [&](const VecX& y) {
                const auto p = Mp_->eval(cplx(y[0], y[1]));
                cplx g(0.0);
                for (int k = 0; k < n; ++k) g += std::conj(p.xi[k] - xi[k]) * p.dxi[k];
                // d/dy1 of |.|^2 is 2 Re(conj(d) dxi), d/dy2 is 2 Re(conj(d) i dxi)
                VecX out(2);
                out << 2.0 * g.real(), -2.0 * g.imag();
                return out;
            };
            const MatX A = 2.0 * Mp_->rho(z) * MatX::Identity(2, 2);
            VecX y0(2);
            y0 << z.real(), z.imag();
            const VecX y = banach_iterate(grad, A, y0, opt_.tol, opt_.max_iter, &st);
            if (ratio) *ratio = st.ratio;
            return {y[0], y[1]};
        }

        // blended zone: minimize (1 - kappa) |xi' - xi|^2 + kappa D_Gamma over chart coordinates of M'
        const int c = loc.chart;
        const RectifiedChart& ch = Mp_->chart(c);
        auto terms = [&](const VecX& x, Mat2* gram, Mat2* dlr_out) {
            const auto jac = ch.jacobian(x[0], x[1]);
            std::vector<cplx> v, d1, d2;
            if (n == 1) {
                v = {ch.from_chart(x[0], x[1])};
                d1 = {jac[0]};
                d2 = {jac[1]};
            } else {
                const ChebJet j = Mp_->chart_jet(c, x[0], x[1], false);
                v = j.f;
                d1 = j.f1;
                d2 = j.f2;
                v[0] = ch.from_chart(x[0], x[1]);
                d1[0] = jac[0];
                d2[0] = jac[1];
            }
            double lp = 0.0, rp = 0.0;
            Mat2 dlr;
            if (!locate_target(c, Vec2(x[0], x[1]), lp, rp, &dlr))
                throw Error(ErrorKind::MinimizationDiverged, "iterate left the geodesic table");
            cplx g1(0.0), g2(0.0);
            for (int k = 0; k < n; ++k) {
                g1 += std::conj(v[k] - xi[k]) * d1[k];
                g2 += std::conj(v[k] - xi[k]) * d2[k];
            }
            if (gram) {
                gram->setZero();
                for (int k = 0; k < n; ++k) {
                    (*gram)(0, 0) += std::norm(d1[k]);
                    (*gram)(1, 1) += std::norm(d2[k]);
                    (*gram)(0, 1) += std::real(std::conj(d1[k]) * d2[k]);
                }
                (*gram)(1, 0) = (*gram)(0, 1);
            }
            if (dlr_out) *dlr_out = dlr;
            const Vec2 gi(2.0 * g1.real(), 2.0 * g2.real());
            const Vec2 gb = 2.0 * dlr.transpose() * Vec2(lp - loc.l, rp - loc.r);
            return Vec2((1.0 - kap) * gi + kap * gb);
        };
        const auto x0a = ch.to_chart(z);
        VecX x0(2);
        x0 << x0a[0], x0a[1];
        Mat2 gram, dlr;
        terms(x0, &gram, &dlr);
        const MatX A = (1.0 - kap) * 2.0 * gram + kap * 2.0 * dlr.transpose() * dlr;
        const VecX x = banach_iterate([&](const VecX& y) { return VecX(terms(y, nullptr, nullptr)); }, A, x0, opt_.tol, opt_.max_iter, &st);
        if (ratio) *ratio = st.ratio;
        return ch.from_chart(x[0], x[1]);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ContractionFailed || e.kind() == ErrorKind::NoConvergence)
            throw Error(ErrorKind::MinimizationDiverged, e.what());
        throw;
    }
}

cplx AlphaMap::eval(cplx z, int hint) const { return eval_impl(z, hint, nullptr); }

double AlphaMap::contraction_at(cplx z, int hint) const {
    double r = 0.0;
    eval_impl(z, hint, &r);
    return r;
}

std::vector<cplx> AlphaMap::eval_point(cplx z, int hint) const { return Mp_->eval(eval(z, hint)).xi; }

double select_r0(const SurfaceModel& M, const SurfaceModel& Mp, const AlphaOptions& opt) {
    for (double u : opt.r0_ladder) {
        const double r0 = u * M.length() / kTwoPi;
        bool ok = true;
        for (const SurfaceModel* S : {&M, &Mp}) {
            for (int c = 0; c < S->n_charts() && ok; ++c) {
                ShootOptions so;
                so.n_mu = 5;
                so.n_r = 2;
                so.mu_extent = mu_extent(*S);
                try {
                    shoot_geodesics(S->chart_metric(c), 2.0 * r0, so);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::CausticDetected && e.kind() != ErrorKind::ChartExit) throw;
                    ok = false;
                }
            }
        }
        if (ok) return r0;
    }
    throw Error(ErrorKind::CausticDetected, "no r0 on the ladder gives a caustic-free strip");
}

// ---- report ----------------------------------------------------------------

std::string QcMapReport::to_json() const {
    nlohmann::json j;
    j["K"] = K;
    j["teich_upper"] = teich_upper;
    j["displacement"] = displacement;
    j["metric_distortion"] = metric_distortion;
    j["hausdorff"] = hausdorff;
    j["r0"] = r0;
    j["glue_mismatch"] = glue_mismatch;
    j["boundary_mismatch"] = boundary_mismatch;
    j["max_contraction"] = max_contraction;
    j["fd_noise_floor"] = fd_noise_floor;
    j["n_probes"] = n_probes;
    j["n_interior_discs"] = n_interior_discs;
    j["distortion_violations"] = distortion_violations;
    // flat [re0, im0, re1, im1, ...] in probe order
    std::vector<double> flat;
    for (const cplx& m : mu_samples) {
        flat.push_back(m.real());
        flat.push_back(m.imag());
    }
    j["mu_samples"] = flat;
    j["mu_ordering"] = "interior grid row-major (x outer), then strip l-major, then ring l-major";
    return j.dump(2);
}

namespace {

// Golden-section refinement of the closest boundary point of S to p.
std::vector<cplx> boundary_projection(const SurfaceModel& S, const std::vector<cplx>& p) {
    const auto& g = S.embedding().grid();
    const int N = g.n_samples();
    int best = 0;
    double bd = 1e300;
    for (int j = 0; j < N; ++j) {
        double s = 0.0;
        for (int k = 0; k < S.dim(); ++k) s += std::norm(S.embedding().eta(k).values()[j] - p[k]);
        if (s < bd) {
            bd = s;
            best = j;
        }
    }
    auto f = [&](double l) { return dist(S.boundary_point(l), p); };
    double a = g.node(best) - g.spacing(), b = g.node(best) + g.spacing();
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    auto q = S.boundary_point(0.5 * (a + b));
    // the sample itself may be closer when the refinement is at rounding level
    auto s = S.boundary_point(g.node(best));
    return dist(s, p) <= dist(q, p) ? s : q;
}

// Closest point of S to p: p itself when its projection lies inside and the
// embedding is planar, otherwise the better of an interior Gauss-Newton
// descent and the boundary projection.
std::vector<cplx> project(const SurfaceModel& S, const std::vector<cplx>& p) {
    auto best = boundary_projection(S, p);
    double bd = dist(best, p);
    const cplx z0 = p[0];
    if (S.dim() == 1) {
        if (S.inside(z0)) return p;
        return best;
    }
    if (!S.inside(z0)) return best;
    cplx z = z0;
    for (int it = 0; it < 50; ++it) {
        const auto e = S.eval(z);
        cplx g(0.0);
        double rho = 0.0;
        for (int k = 0; k < S.dim(); ++k) {
            g += std::conj(e.xi[k] - p[k]) * e.dxi[k];
            rho += std::norm(e.dxi[k]);
        }
        const cplx step = std::conj(g) / rho;
        const cplx next = z - step;
        if (!S.inside(next)) break;
        z = next;
        if (std::abs(step) < 1e-15) break;
    }
    auto q = S.eval(z).xi;
    if (dist(q, p) < bd) return q;
    return best;
}

std::vector<std::vector<cplx>> sample_cloud(const AlphaMap& A, bool target, const std::vector<cplx>& grid, const AlphaOptions& opt) {
    const SurfaceModel& S = target ? A.target() : A.source();
    std::vector<std::vector<cplx>> cloud;
    const double L = S.length();
    for (int j = 0; j < opt.hausdorff_boundary; ++j) cloud.push_back(S.boundary_point(j * L / opt.hausdorff_boundary));
    const int nr = opt.strip_r + opt.blend_r;
    for (int j = 0; j < opt.strip_l; ++j) {
        const double l = (j + 0.5) * L / opt.strip_l;
        const int c = S.chart_for(l);
        for (int k = 0; k < nr; ++k) cloud.push_back(S.eval(A.from_lr(target, c, l, (k + 0.5) / nr * 2.0 * A.r0() / 3.0)).xi);
    }
    for (const cplx& z : grid)
        if (S.inside(z)) cloud.push_back(S.eval(z).xi);
    return cloud;
}

}  // namespace

AlphaBuild build_alpha(std::shared_ptr<const SurfaceModel> M, std::shared_ptr<const SurfaceModel> Mp, const AlphaOptions& opt) {
    const double r0 = select_r0(*M, *Mp, opt);
    auto alpha = std::make_shared<const AlphaMap>(M, Mp, r0, opt);
    const AlphaMap& A = *alpha;
    AlphaBuild out;
    out.alpha = alpha;
    QcMapReport& rep = out.report;
    rep.r0 = r0;
    const double L = M->length();

    // probes
    const BoundaryFn& eta = M->embedding().eta(0);
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const cplx& v : eta.values()) {
        x_lo = std::min(x_lo, v.real());
        x_hi = std::max(x_hi, v.real());
        y_lo = std::min(y_lo, v.imag());
        y_hi = std::max(y_hi, v.imag());
    }
    std::vector<cplx> grid;
    const int ni = opt.interior_probes;
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < ni; ++j) grid.emplace_back(x_lo + (i + 0.5) / ni * (x_hi - x_lo), y_lo + (j + 0.5) / ni * (y_hi - y_lo));
    std::vector<Probe>& probes = out.probes;
    for (const cplx& z : grid)
        if (M->inside(z) && A.locate(z).r >= r0 / 3.0) probes.push_back({z, -1});
    const int n_interior = static_cast<int>(probes.size());
    auto ring = [&](int nl, int nr, double r_lo) {
        for (int j = 0; j < nl; ++j) {
            const double l = (j + 0.5) * L / nl;
            const int c = M->chart_for(l);
            for (int k = 0; k < nr; ++k) probes.push_back({A.from_lr(false, c, l, r_lo + (k + 0.5) / nr * r0 / 3.0), c});
        }
    };
    ring(opt.strip_l, opt.strip_r, 0.0);
    ring(opt.blend_l, opt.blend_r, r0 / 3.0);
    rep.n_probes = static_cast<int>(probes.size());

    // interior cover: greedy discs in the global coordinate avoiding r <= r0/6
    const double r_max_disc = 0.5 * L / kTwoPi;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        if (static_cast<int>(p) >= n_interior && p < static_cast<std::size_t>(n_interior + opt.strip_l * opt.strip_r)) continue;
        const cplx z = probes[p].z;
        bool covered = false;
        for (const auto& d : out.cover)
            if (std::abs(z - d.center) <= 0.85 * d.radius) {
                covered = true;
                break;
            }
        if (covered) continue;
        double de = 0.0;
        M->foot_point(z, &de);
        const double R = std::min(de - r0 / 6.0 / std::sqrt(M->rho(z)), r_max_disc);
        if (!(R > 0.0)) throw Error(ErrorKind::NotProjective, "interior probe cannot be covered away from the boundary band");
        out.cover.push_back({z, R});
    }
    rep.n_interior_discs = static_cast<int>(out.cover.size());

    // Beltrami quotient with stencils pinned to the probe's chart
    std::vector<cplx> pz;
    for (const auto& p : probes) pz.push_back(p.z);
    const auto bel = beltrami_dilatation([&](cplx z, int i) { return A.eval(z, probes[i].chart); }, pz, opt.fd_step);
    rep.mu_samples = bel.mu;
    rep.K = bel.K;
    rep.teich_upper = teich_bound(rep.K);
    rep.fd_noise_floor = opt.tol / opt.fd_step;

    std::vector<std::vector<cplx>> src, img;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const cplx z = probes[i].z;
        const int c = probes[i].chart;
        rep.max_contraction = std::max(rep.max_contraction, A.contraction_at(z, c));
        const cplx w = A.eval(z, c);
        src.push_back(M->eval(z).xi);
        img.push_back(Mp->eval(w).xi);
        rep.displacement = std::max(rep.displacement, dist(src.back(), img.back()));

        // stretch of alpha^* g' against g: (|d| +- |dbar|)^2 rho'/rho
        const double h = opt.fd_step;
        const cplx ax = (A.eval(z + h, c) - A.eval(z - h, c)) / (2.0 * h);
        const cplx ay = (A.eval(z + cplx(0, h), c) - A.eval(z - cplx(0, h), c)) / (2.0 * h);
        const double dz = std::abs(0.5 * (ax - cplx(0, 1) * ay));
        const double dzb = std::abs(bel.mu[i]) * dz;
        const double s = Mp->rho(w) / M->rho(z);
        const double D = std::max(std::abs((dz + dzb) * (dz + dzb) * s - 1.0), std::abs((dz - dzb) * (dz - dzb) * s - 1.0));
        rep.metric_distortion = std::max(rep.metric_distortion, D);
        if (D < 1.0 && bel.k[i] * bel.k[i] > (1.0 + D) / (1.0 - D) * (1.0 + 1e-6)) ++rep.distortion_violations;
    }

    // boundary fixing: alpha(E(l)) = E'(l)
    for (int j = 0; j < opt.hausdorff_boundary; ++j) {
        const double l = j * L / opt.hausdorff_boundary;
        const int c = M->chart_for(l);
        const auto img = Mp->eval(A.from_lr(true, c, l, 0.0)).xi;
        const auto src = M->boundary_point(l);
        const auto tgt = Mp->boundary_point(l);
        rep.boundary_mismatch = std::max(rep.boundary_mismatch, std::abs(img[0] - tgt[0]));
        rep.displacement = std::max(rep.displacement, dist(src, tgt));
    }
    if (rep.boundary_mismatch > opt.glue_tol) {
        std::ostringstream os;
        os << "alpha moves boundary samples by " << rep.boundary_mismatch;
        throw Error(ErrorKind::GlueMismatch, os.str());
    }

    // overlap consistency between adjacent strip charts
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int C = M->n_charts();
    for (int k = 0; k < opt.overlap_probes; ++k) {
        const int c = static_cast<int>(U(rng) * C) % C;
        const double l = M->chart(c).base_point() + (0.42 + 0.16 * U(rng)) * L / C;
        const double r = (0.02 + 0.96 * U(rng)) * 2.0 * r0 / 3.0;
        const cplx z = A.from_lr(false, c, l, r);
        const double m = dist(A.eval_point(z, c), A.eval_point(z, (c + 1) % C));
        rep.glue_mismatch = std::max(rep.glue_mismatch, m);
    }
    if (rep.glue_mismatch > opt.glue_tol) {
        std::ostringstream os;
        os << "charts disagree by " << rep.glue_mismatch << " on their overlap";
        throw Error(ErrorKind::GlueMismatch, os.str());
    }

    // injectivity on the probe set: a near-isometry cannot fold pairs together
    for (std::size_t i = 0; i < probes.size(); ++i)
        for (std::size_t j = i + 1; j < probes.size(); ++j)
            if (dist(img[i], img[j]) < 0.5 * dist(src[i], src[j]))
                throw Error(ErrorKind::NotInjective, "alpha folds two probes together");

    // Hausdorff distance of the images, clouds augmented with closest points
    auto cloud_a = sample_cloud(A, false, grid, opt);
    auto cloud_b = sample_cloud(A, true, grid, opt);
    const std::size_t na = cloud_a.size(), nb = cloud_b.size();
    for (std::size_t i = 0; i < nb; ++i) cloud_a.push_back(project(*M, cloud_b[i]));
    for (std::size_t i = 0; i < na; ++i) cloud_b.push_back(project(*Mp, cloud_a[i]));
    rep.hausdorff = hausdorff_distance(cloud_a, cloud_b);
    return out;
}

AlphaBuild build_alpha(const Embedding& E, const Embedding& E_prime, const AlphaOptions& opt, const SurfaceModelOptions& model_opt) {
    auto M = std::make_shared<const SurfaceModel>(E, model_opt);
    auto Mp = std::make_shared<const SurfaceModel>(E_prime, model_opt);
    return build_alpha(M, Mp, opt);
}

}  // namespace teichstab
