#include "teichstab/argument_principle.hpp"

#include <algorithm>
#include <cmath>

namespace teichstab {

Embedding::Embedding(std::vector<HoloTrace> traces, std::shared_ptr<const DnMap> source)
    : traces_(std::move(traces)), source_(std::move(source)) {
    if (traces_.empty()) throw Error(ErrorKind::InvalidArgument, "an embedding needs at least one trace");
    for (const auto& t : traces_) {
        if (t.eta.grid() != traces_.front().eta.grid()) throw Error(ErrorKind::GridMismatch, "traces on different grids");
        deta_.push_back(d_gamma(t.eta));
    }
}

double separation_floor(const BoundaryGrid& grid) { return 5.0 * grid.total_length() / grid.n_samples(); }

double contour_distance(const BoundaryFn& eta, cplx z) {
    double d = INFINITY;
    for (const auto& v : eta.values()) d = std::min(d, std::abs(v - z));
    return d;
}

namespace {

void require_separated(const BoundaryFn& eta, cplx z) {
    const double d = contour_distance(eta, z);
    const double floor = separation_floor(eta.grid());
    if (!(d > floor))
        throw Error(ErrorKind::TooCloseToContour,
                    "distance " + std::to_string(d) + " to the contour is below the floor " + std::to_string(floor));
}

double factorial(int m) {
    double f = 1.0;
    for (int k = 2; k <= m; ++k) f *= k;
    return f;
}

}  // namespace

cplx gap_integral(const BoundaryFn& eta_tilde, const BoundaryFn& eta, cplx z) {
    require_separated(eta, z);
    const BoundaryFn deta = d_gamma(eta);
    cplx acc(0.0);
    for (int j = 0; j < eta.size(); ++j) acc += eta_tilde.value(j) * deta.value(j) / (eta.value(j) - z);
    return acc * eta.grid().spacing() / cplx(0.0, kTwoPi);
}

int multiplicity(const BoundaryFn& eta, cplx z, double* residual) {
    const cplx v = gap_integral(BoundaryFn::constant(eta.grid(), 1.0), eta, z);
    const double r = std::round(v.real());
    const double res = std::abs(v - r);
    if (residual) *residual = res;
    if (res >= 0.1) throw Error(ErrorKind::NonIntegerWinding, "winding integral " + std::to_string(v.real()) + " is not near an integer");
    return static_cast<int>(r);
}

std::vector<cplx> cauchy_eval(const Embedding& E, int i, cplx z, int m) {
    if (i < 0 || i >= E.size() || m < 0) throw Error(ErrorKind::InvalidArgument, "cauchy_eval: bad index or order");
    const BoundaryFn& ei = E.eta(i);
    require_separated(ei, z);
    const int mul = multiplicity(ei, z);
    if (mul != 1) throw Error(ErrorKind::NotProjective, "multiplicity " + std::to_string(mul) + " at the query point");
    const BoundaryFn& di = E.deta(i);
    const int n = ei.size();
    std::vector<cplx> kern(n);
    for (int j = 0; j < n; ++j) kern[j] = di.value(j) / std::pow(ei.value(j) - z, m + 1);
    std::vector<cplx> out(E.size());
    const cplx scale = factorial(m) * ei.grid().spacing() / cplx(0.0, kTwoPi);
    for (int k = 0; k < E.size(); ++k) {
        cplx acc(0.0);
        for (int j = 0; j < n; ++j) acc += E.eta(k).value(j) * kern[j];
        out[k] = acc * scale;
    }
    return out;
}

// ---- rectified chart ------------------------------------------------------

RectifiedChart::RectifiedChart(const BoundaryFn& eta_i, const BoundaryFn& deta_i, int index, double l0, double a, double b)
    : eta_c_(eta_i.coeffs()), deta_c_(deta_i.coeffs()), period_(eta_i.grid().total_length()), index_(index), l0_(l0), a_(a), b_(b) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::InvalidArgument, "chart half rectangle must be nonempty");
    z0_ = eta(l0);
    d0_ = deta(l0);
    if (std::abs(d0_) < 1e-12) throw Error(ErrorKind::DegenerateImmersion, "vanishing tangent at the chart base point");
    // walk outwards until l~ covers [-a, a], checking monotonicity on the way
    const double step = eta_i.grid().spacing() / 4.0;
    for (int dir : {1, -1}) {
        double l = l0;
        while (true) {
            const double dl = std::real(deta(l) / d0_);
            if (dl <= 0.0) throw Error(ErrorKind::ChartTooLarge, "l~ is not monotone on the requested chart width");
            if (dir * l_tilde(l) >= a * 1.05) break;
            l += dir * step;
            if (std::abs(l - l0) > period_ / 2) throw Error(ErrorKind::ChartTooLarge, "chart wraps around the boundary");
        }
        (dir > 0 ? l_hi_ : l_lo_) = l;
    }
}

cplx RectifiedChart::eta(double l) const { return spectral::evaluate(eta_c_, kTwoPi * l / period_); }
cplx RectifiedChart::deta(double l) const { return spectral::evaluate(deta_c_, kTwoPi * l / period_); }

bool RectifiedChart::contains(double x1, double x2, double slack) const {
    return std::abs(x1) <= a_ + slack && x2 >= -slack && x2 <= b_ + slack;
}

double RectifiedChart::l_tilde(double l) const { return std::real((eta(l) - z0_) / d0_); }

double RectifiedChart::l_tilde_inv(double x1) const {
    double l = l0_ + x1;
    double lo = l_lo_, hi = l_hi_;
    const bool bracketed = std::abs(x1) <= a_ * 1.05;
    for (int it = 0; it < 100; ++it) {
        const double f = l_tilde(l) - x1;
        if (std::abs(f) <= 1e-16 * std::max(1.0, std::abs(x1))) return l;
        if (f > 0) hi = std::min(hi, l);
        else lo = std::max(lo, l);
        double next = l - f / std::real(deta(l) / d0_);
        // keep Newton inside the current bracket when one is available
        if (bracketed && (next < lo || next > hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - l) <= 1e-16 * std::max(1.0, std::abs(l))) return next;
        l = next;
    }
    return l;
}

std::array<double, 2> RectifiedChart::to_chart(cplx z) const {
    const double x1 = std::real((z - z0_) / d0_);
    const double l = l_tilde_inv(x1);
    const double x2 = std::imag((z - eta(l)) / d0_);
    return {x1, x2};
}

cplx RectifiedChart::from_chart(double x1, double x2) const {
    return eta(l_tilde_inv(x1)) + cplx(0.0, x2) * d0_;
}

std::array<cplx, 2> RectifiedChart::jacobian(double x1, double) const {
    const double l = l_tilde_inv(x1);
    const cplx d = deta(l);
    return {d / std::real(d / d0_), cplx(0.0, 1.0) * d0_};
}

RectifiedChart rectified_coords(const Embedding& E, int i, double l0, double a, double b) {
    if (i < 0 || i >= E.size()) throw Error(ErrorKind::InvalidArgument, "trace index out of range");
    return {E.eta(i), E.deta(i), i, l0, a, b};
}

// ---- near-boundary evaluation --------------------------------------------

namespace {

struct GaussRule {
    std::array<double, 16> x{}, w{};
    GaussRule() {
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) {
                    x[i] = t;
                    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
                    break;
                }
                x[i] = t;
                w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
            }
        }
    }
};

const GaussRule& gauss16() {
    static const GaussRule rule;
    return rule;
}

double window(double s, double delta) {
    const double as = std::abs(s);
    if (as >= delta) return 0.0;
    return 0.5 * std::erfc((as - 0.5 * delta) / (delta / 12.0));
}

double wrap(double s, double period) {
    s = std::fmod(s, period);
    if (s >= period / 2) s -= period;
    if (s < -period / 2) s += period;
    return s;
}

}  // namespace

std::vector<cplx> near_boundary_eval(const Embedding& E, const RectifiedChart& chart, double x1, double x2, int m,
                                     const NearBoundaryOptions& opt) {
    if (m < 0) throw Error(ErrorKind::InvalidArgument, "derivative order must be nonnegative");
    if (!chart.contains(x1, x2)) throw Error(ErrorKind::ChartExceeded, "point outside the chart half rectangle");
    const int i = chart.trace_index();
    const int p = opt.taylor_order >= 0 ? opt.taylor_order : m + 2;
    if (p < m) throw Error(ErrorKind::InvalidArgument, "taylor_order must be >= m");
    const BoundaryGrid& grid = E.grid();
    const double L = grid.total_length();
    double delta = opt.delta > 0.0 ? opt.delta : 10.0 * separation_floor(grid);
    delta = std::min(delta, L / 4.0);
    const int nt = E.size();

    const double ls = chart.l_tilde_inv(x1);
    const cplx zeta0 = chart.eta(ls);
    const cplx z = zeta0 + cplx(0.0, x2) * chart.d0();

    // Taylor coefficients of w_j o w_i^-1 at zeta0 from tangential derivatives.
    std::vector<std::vector<cplx>> c(nt, std::vector<cplx>(p + 1));
    const BoundaryFn& di = E.deta(i);
    for (int j = 0; j < nt; ++j) {
        BoundaryFn dk = E.eta(j);
        double fact = 1.0;
        for (int k = 0; k <= p; ++k) {
            if (k > 0) {
                dk = d_gamma(dk).divided_by(di);
                fact *= k;
            }
            c[j][k] = dk.eval(ls) / fact;
        }
    }
    auto poly = [&](int j, cplx zeta) {
        cplx acc(0.0);
        const cplx u = zeta - zeta0;
        for (int k = p; k >= 0; --k) acc = acc * u + c[j][k];
        return acc;
    };

    std::vector<cplx> acc(nt, cplx(0.0));
    // smooth part on the grid
    const double h = grid.spacing();
    for (int q = 0; q < grid.n_samples(); ++q) {
        const double s = wrap(grid.node(q) - ls, L);
        const double wgt = 1.0 - window(s, delta);
        if (wgt == 0.0) continue;
        const cplx ei = E.eta(i).value(q);
        const cplx kern = di.value(q) / std::pow(ei - z, m + 1) * (wgt * h);
        for (int j = 0; j < nt; ++j) acc[j] += (E.eta(j).value(q) - poly(j, ei)) * kern;
    }

    // windowed part on graded Gauss panels around the foot point
    const double sigma = delta / 12.0;
    const double speed = std::abs(chart.deta(ls));
    // Grade toward the near singularity at distance ~x2. When it is tiny the
    // remainder is already smooth there, and deeper grading only amplifies
    // cancellation in eta_j - P(eta_i).
    double scale = x2 * std::abs(chart.d0()) / std::max(speed, 1e-300) / 4.0;
    if (scale < delta * 1e-4) scale = delta * 1e-2;
    std::vector<std::pair<double, double>> panels;
    double b = delta;
    while (b > scale) {
        const double a = b / 2.0;
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / sigma)));
        for (int k = 0; k < pieces; ++k) panels.emplace_back(a + (b - a) * k / pieces, a + (b - a) * (k + 1) / pieces);
        b = a;
    }
    panels.emplace_back(0.0, b);

    std::vector<const std::vector<cplx>*> coeffs;
    coeffs.push_back(&E.eta(i).coeffs());
    coeffs.push_back(&di.coeffs());
    for (int j = 0; j < nt; ++j) coeffs.push_back(&E.eta(j).coeffs());
    std::vector<cplx> vals(coeffs.size());
    const auto& g = gauss16();
    for (int side : {1, -1})
        for (const auto& [pa, pb] : panels) {
            const double half = 0.5 * (pb - pa), mid = 0.5 * (pb + pa);
            for (int k = 0; k < 16; ++k) {
                const double s = side * (mid + half * g.x[k]);
                const double wgt = window(s, delta) * g.w[k] * half;
                if (wgt == 0.0) continue;
                spectral::evaluate_many(coeffs, kTwoPi * (ls + s) / L, vals.data());
                const cplx kern = vals[1] / std::pow(vals[0] - z, m + 1) * wgt;
                for (int j = 0; j < nt; ++j) acc[j] += (vals[2 + j] - poly(j, vals[0])) * kern;
            }
        }

    const double mf = factorial(m);
    std::vector<cplx> out(nt);
    const cplx u = z - zeta0;
    for (int j = 0; j < nt; ++j) {
        // exact contribution of the subtracted polynomial: P^(m)(z)
        cplx pm(0.0);
        for (int k = p; k >= m; --k) pm = pm * u + c[j][k] * (factorial(k) / factorial(k - m));
        out[j] = acc[j] * mf / cplx(0.0, kTwoPi) + pm;
    }
    return out;
}

Embedding induced_embedding(const Embedding& E, std::shared_ptr<const DnMap> lambda_prime, const TraceProjector& P_prime,
                            double tol, int i, const std::vector<cplx>& probes) {
    std::vector<HoloTrace> out;
    out.reserve(E.size());
    for (int k = 0; k < E.size(); ++k) {
        HoloTrace t = beta_hat(E.trace(k), lambda_prime, P_prime);
        const TraceResidual r = trace_residual(t.eta, *lambda_prime, P_prime);
        if (!(r.conjugate <= tol && r.projection <= tol))
            throw Error(ErrorKind::InducedTraceInvalid, "induced trace " + std::to_string(k) + " fails verification (" +
                                                            std::to_string(r.conjugate) + ", " + std::to_string(r.projection) + ")");
        out.push_back(std::move(t));
    }
    Embedding result(std::move(out), lambda_prime);
    for (const cplx& z : probes) {
        int mul = 0;
        try {
            mul = multiplicity(result.eta(i), z);
        } catch (const Error& e) {
            throw Error(ErrorKind::InducedTraceInvalid, std::string("projectivity check: ") + e.what());
        }
        if (mul != 1) throw Error(ErrorKind::InducedTraceInvalid, "induced cylinder is not projective at a probe");
    }
    return result;
}

}  // namespace teichstab
