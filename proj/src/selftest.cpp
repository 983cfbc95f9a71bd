#include <cmath>
#include <functional>

#include "teichstab/experiments.hpp"

namespace teichstab {

namespace {

struct Check {
    const char* name;
    std::function<bool()> run;
};

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

bool same(const BoundaryFn& a, const BoundaryFn& b, double tol) { return (a - b).sup_norm() <= tol; }

template <class F>
bool throws_kind(ErrorKind k, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == k;
    }
    return false;
}

}  // namespace

int run_selftest(std::ostream& out) {
    const BoundaryGrid g(64, kTwoPi);
    auto fn = [&](std::function<cplx(double)> f) { return BoundaryFn::sample(g, f); };
    auto lam = std::make_shared<const DnMap>(disc_dn(g));
    auto P = std::make_shared<TraceProjector>(projector_P(*lam));
    auto disc_E = [&](bool two) {
        std::vector<HoloTrace> tr{{fn([](double l) { return std::polar(1.0, l); }), lam}};
        if (two) tr.push_back({fn([](double l) { return std::polar(1.0, 2 * l); }), lam});
        return Embedding(tr, lam);
    };
    auto disc_spec = [&](std::vector<cplx> series) {
        SurfaceSpec s;
        s.series = std::move(series);
        s.grid = g;
        return s;
    };

    const std::vector<Check> checks{
        {"d_gamma sin(2 pi l / L) = cos l",
         [&] { return same(d_gamma(fn([](double l) { return std::sin(l); })), fn([](double l) { return std::cos(l); }), 1e-12); }},
        {"d_gamma 1 = 0", [&] { return d_gamma(BoundaryFn::constant(g, 1.0)).sup_norm() < 1e-14; }},
        {"d_gamma cos 3l = -3 sin 3l",
         [&] { return same(d_gamma(fn([](double l) { return std::cos(3 * l); })), fn([](double l) { return -3.0 * std::sin(3 * l); }), 1e-12); }},
        {"J cos = sin", [&] { return same(integrate_J(fn([](double l) { return std::cos(l); })), fn([](double l) { return std::sin(l); }), 1e-13); }},
        {"J sin = -cos", [&] { return same(integrate_J(fn([](double l) { return std::sin(l); })), fn([](double l) { return -std::cos(l); }), 1e-13); }},
        {"J 1 raises MeanNotZero", [&] { return throws_kind(ErrorKind::MeanNotZero, [&] { integrate_J(BoundaryFn::constant(g, 1.0)); }); }},
        {"norm of zero operator = 0", [&] { return operator_norm_h1_l2(BoundaryOperator::zero(g)) == 0.0; }},
        {"norm of identity = 1", [&] { return std::abs(operator_norm_h1_l2(BoundaryOperator::identity(g)) - 1.0) < 1e-13; }},
        {"Lambda_disc e^{3i theta} = 3 e^{3i theta}",
         [&] { return same(lam->apply(fn([](double l) { return std::polar(1.0, 3 * l); })), fn([](double l) { return 3.0 * std::polar(1.0, 3 * l); }), 1e-12); }},
        {"Lambda_disc 1 = 0", [&] { return lam->apply(BoundaryFn::constant(g, 1.0)).sup_norm() < 1e-13; }},
        {"Lambda_disc sin = sin", [&] { return same(lam->apply(fn([](double l) { return std::sin(l); })), fn([](double l) { return std::sin(l); }), 1e-13); }},
        {"normalize 2z -> z", [&] { return near(normalize_length(disc_spec({2.0}), kTwoPi).series[0], 1.0, 1e-12); }},
        {"normalize z unchanged", [&] { return near(normalize_length(disc_spec({1.0}), kTwoPi).series[0], 1.0, 1e-14); }},
        {"pushforward of z = disc", [&] { return dn_distance(pushforward_dn(disc_spec({1.0})), *lam) < 1e-10; }},
        {"pushforward of 3z normalized = disc",
         [&] { return dn_distance(pushforward_dn(normalize_length(disc_spec({3.0}), kTwoPi)), *lam) < 1e-10; }},
        {"dn_distance(L, L) = 0", [&] { return dn_distance(*lam, *lam) == 0.0; }},
        {"dn_distance(L, L + I) = 1",
         [&] {
             DnMap shifted(lam->op() + BoundaryOperator::identity(g), lam->guard() + BoundaryOperator::identity(lam->guard().grid()));
             return std::abs(dn_distance(*lam, shifted) - 1.0) < 1e-12;
         }},
        {"P_disc = identity, codim 0",
         [&] { return P->codim == 0 && (P->P.matrix() - Eigen::MatrixXd::Identity(g.basis_dim(), g.basis_dim())).norm() < 1e-10; }},
        {"lift cos -> e^{i theta}",
         [&] { return same(trace_lift(fn([](double l) { return std::cos(l); }), 0.0, lam, *P).eta, fn([](double l) { return std::polar(1.0, l); }), 1e-12); }},
        {"lift 1, c = 5 -> 1 + 5i", [&] { return same(trace_lift(BoundaryFn::constant(g, 1.0), 5.0, lam, *P).eta, BoundaryFn::constant(g, cplx(1, 5)), 1e-12); }},
        {"lift cos 2 - cos -> e^{2i} - e^{i}",
         [&] {
             return same(trace_lift(fn([](double l) { return std::cos(2 * l) - std::cos(l); }), 0.0, lam, *P).eta,
                         fn([](double l) { return std::polar(1.0, 2 * l) - std::polar(1.0, l); }), 1e-12);
         }},
        {"e^{i theta} is a trace", [&] { return verify_trace(fn([](double l) { return std::polar(1.0, l); }), *lam, 1e-8); }},
        {"e^{-i theta} is not a trace", [&] { return !verify_trace(fn([](double l) { return std::polar(1.0, -l); }), *lam, 1e-8); }},
        {"beta_hat with Lambda' = Lambda is the identity",
         [&] {
             HoloTrace h{fn([](double l) { return std::polar(1.0, l) + 0.3 * std::polar(1.0, 2 * l); }), lam};
             return same(beta_hat(h, lam, *P).eta, h.eta, 1e-12);
         }},
        {"beta_hat keeps constants",
         [&] {
             auto lp = std::make_shared<const DnMap>(pushforward_dn(normalize_length(disc_spec({1.0, 0.05}), kTwoPi)));
             HoloTrace h{BoundaryFn::constant(g, cplx(0.7, -1.2)), lam};
             return same(beta_hat(h, lp, projector_P(*lp)).eta, h.eta, 1e-12);
         }},
        {"gap(z^2, z; 0) = 0", [&] { auto E = disc_E(true); return std::abs(gap_integral(E.eta(1), E.eta(0), 0.0)) < 1e-14; }},
        {"gap(z^2, z; 0.5) = 0.25", [&] { auto E = disc_E(true); return near(gap_integral(E.eta(1), E.eta(0), 0.5), 0.25, 1e-13); }},
        {"gap(1, z; 2) = 0", [&] { auto E = disc_E(false); return std::abs(gap_integral(BoundaryFn::constant(g, 1.0), E.eta(0), 2.0)) < 1e-14; }},
        {"multiplicity(z; 0) = 1", [&] { return multiplicity(disc_E(false).eta(0), 0.0) == 1; }},
        {"multiplicity(z^2; 0) = 2", [&] { return multiplicity(disc_E(true).eta(1), 0.0) == 2; }},
        {"multiplicity(z; 2) = 0", [&] { return multiplicity(disc_E(false).eta(0), 2.0) == 0; }},
        {"cauchy (z, z^2) at 0.3", [&] {
             auto v = cauchy_eval(disc_E(true), 0, 0.3, 0);
             return near(v[0], 0.3, 1e-12) && near(v[1], 0.09, 1e-12);
         }},
        {"cauchy derivative (1, 0.6)", [&] {
             auto v = cauchy_eval(disc_E(true), 0, 0.3, 1);
             return near(v[0], 1.0, 1e-11) && near(v[1], 0.6, 1e-11);
         }},
        {"rectified chart of the circle", [&] {
             auto c = rectified_coords(disc_E(false), 0, 0.0, 0.3, 0.5);
             const auto x = c.to_chart(1.0 - 1e-3);
             const auto b = c.to_chart(std::polar(1.0, 0.1));
             return std::abs(x[0]) < 1e-14 && std::abs(x[1] - 1e-3) < 1e-6 && std::abs(b[1]) < 1e-14 &&
                    std::abs(b[0] - c.l_tilde(0.1)) < 1e-14;
         }},
        {"induced embedding with Lambda' = Lambda", [&] {
             auto E = disc_E(true);
             auto Ei = induced_embedding(E, lam, *P);
             return same(Ei.eta(0), E.eta(0), 1e-12) && same(Ei.eta(1), E.eta(1), 1e-12);
         }},
        {"rho = 1 for E = {z}", [&] { return std::abs(metric_in_chart(disc_E(false), 0, {cplx(0.2, 0.3)})[0] - 1.0) < 1e-12; }},
        {"rho(0.5) = 2 for E = {z, z^2}", [&] { return std::abs(metric_in_chart(disc_E(true), 0, {0.5})[0] - 2.0) < 1e-11; }},
        {"flat geodesics", [&] {
             ConformalMetric h([](const Vec2&) { return 1.0; }, [](const Vec2&) { return Vec2::Zero(); }, 1.0, 1.0);
             auto c = shoot_geodesics(h, 0.5);
             return (c.x[3][5] - Vec2(c.mu[3], c.r[5])).norm() < 1e-12;
         }},
        {"constant conformal geodesics", [&] {
             ConformalMetric h([](const Vec2&) { return 4.0; }, [](const Vec2&) { return Vec2::Zero(); }, 1.0, 1.0);
             auto c = shoot_geodesics(h, 0.5);
             return (c.x[3][5] - Vec2(c.mu[3], c.r[5] / 2.0)).norm() < 1e-12;
         }},
        {"fixed point: shifted diagonal", [&] {
             FixedPointProblem p;
             p.f = [](const VecX& x) { return x; };
             p.F_ref = [](const VecX& x, const VecX& y) { return VecX(y - x); };
             p.H = [](const VecX& x, const VecX& y) { return VecX(y - x - VecX::Constant(1, 1e-3)); };
             for (int k = 0; k <= 10; ++k) p.samples.push_back(VecX::Constant(1, k / 10.0));
             auto r = fixed_point_solve(p);
             return std::abs(r.c1_error - 1e-3) < 1e-9;
         }},
        {"fixed point: H = F_ref gives f", [&] {
             FixedPointProblem p;
             p.f = [](const VecX& x) { return x; };
             p.F_ref = [](const VecX& x, const VecX& y) { return VecX(y - x); };
             p.H = p.F_ref;
             for (int k = 0; k <= 10; ++k) p.samples.push_back(VecX::Constant(1, k / 10.0));
             return fixed_point_solve(p).c0_error == 0.0;
         }},
        {"Beltrami of the identity", [&] { return beltrami_dilatation([](cplx z) { return z; }, {0.1, cplx(0, 0.3)}).K - 1.0 < 1e-9; }},
        {"Beltrami of z + conj(z)/3 gives k = 2",
         [&] { return std::abs(beltrami_dilatation([](cplx z) { return z + std::conj(z) / 3.0; }, {0.1}).k[0] - 2.0) < 1e-10; }},
        {"Beltrami of z + 0.1 conj(z) gives mu = 0.1",
         [&] { return near(beltrami_dilatation([](cplx z) { return z + 0.1 * std::conj(z); }, {0.2}).mu[0], 0.1, 1e-10); }},
        {"teich_bound(1) = 0", [&] { return teich_bound(1.0) == 0.0; }},
        {"teich_bound(e^2) = 1", [&] { return std::abs(teich_bound(std::exp(2.0)) - 1.0) < 1e-15; }},
        {"teich_bound(2) = log(2)/2", [&] { return std::abs(teich_bound(2.0) - 0.5 * std::log(2.0)) < 1e-15; }},
        {"hausdorff(A, A) = 0", [&] { return hausdorff_distance({{0.0}, {1.0}}, {{0.0}, {1.0}}) == 0.0; }},
        {"hausdorff({0}, {1}) = 1", [&] { return hausdorff_distance({{0.0}}, {{1.0}}) == 1.0; }},
        {"negative epsilon is rejected", [&] {
             return throws_kind(ErrorKind::InvalidConfig, [] {
                 ExperimentConfig::from_json_text(
                     R"({"base_surface":{"series":[[1,0]],"n_samples":128,"length":6.283185307179586},)"
                     R"("perturbation":{"direction":[[0,0],[0.5,0]],"epsilons":[-0.1]}})");
             });
         }},
        {"identity pipeline (epsilon list [0])", [&] {
             auto c = ExperimentConfig::from_json_text(
                 R"({"base_surface":{"series":[[1,0]],"n_samples":128,"length":6.283185307179586},)"
                 R"("perturbation":{"direction":[[0,0],[0.5,0]],"epsilons":[0]}})");
             auto rows = run_stability(c);
             return rows.size() == 1 && !rows[0].failed && rows[0].t == 0.0 && rows[0].K_minus_1 <= 1e-6 && rows[0].teich_upper <= 1e-6;
         }},
        {"three rows give header plus three LF lines", [&] {
             std::vector<ExperimentRow> rows(3);
             const std::string s = format_csv(rows);
             return std::count(s.begin(), s.end(), '\n') == 4 && s.find('\r') == std::string::npos;
         }},
    };

    int failures = 0;
    for (const auto& c : checks) {
        bool ok = false;
        std::string why;
        try {
            ok = c.run();
        } catch (const std::exception& e) {
            why = e.what();
        }
        if (!ok) ++failures;
        out << (ok ? "PASS  " : "FAIL  ") << c.name;
        if (!why.empty()) out << "  (" << why << ")";
        out << "\n";
    }
    out << (checks.size() - failures) << "/" << checks.size() << " checks passed\n";
    return failures;
}

}  // namespace teichstab
