#include <doctest.h>

#include <chrono>
#include <cmath>

#include "teichstab/argument_principle.hpp"

using namespace teichstab;

namespace {

struct DiscSetup {
    BoundaryGrid grid;
    std::shared_ptr<const DnMap> lam;
    Embedding E;
    explicit DiscSetup(int n = 256)
        : grid(n, kTwoPi),
          lam(std::make_shared<const DnMap>(disc_dn(grid))),
          E({{BoundaryFn::sample(grid, [](double l) { return std::polar(1.0, l); }), lam},
             {BoundaryFn::sample(grid, [](double l) { return std::polar(1.0, 2 * l); }), lam}},
            lam) {}
};

}  // namespace

TEST_CASE("gap_integral examples") {
    DiscSetup d;
    const auto& z1 = d.E.eta(0);
    const auto& z2 = d.E.eta(1);
    CHECK(std::abs(gap_integral(z2, z1, 0.0)) < 1e-14);
    CHECK(std::abs(gap_integral(z2, z1, 0.5) - 0.25) < 1e-14);
    CHECK(std::abs(gap_integral(BoundaryFn::constant(d.grid, 1.0), z1, 2.0)) < 1e-14);
    try {
        gap_integral(z2, z1, 0.99);
        FAIL("expected TooCloseToContour");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooCloseToContour);
    }
}

TEST_CASE("multiplicity") {
    DiscSetup d;
    CHECK(multiplicity(d.E.eta(0), 0.0) == 1);
    CHECK(multiplicity(d.E.eta(1), 0.0) == 2);
    CHECK(multiplicity(d.E.eta(0), 2.0) == 0);
    double worst = 0.0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) {
            const cplx z(-0.8 + 1.6 * a / 9, -0.8 + 1.6 * b / 9);
            if (std::abs(z) > 0.85) continue;
            double r = 0.0;
            multiplicity(d.E.eta(0), z, &r);
            worst = std::max(worst, r);
        }
    CHECK(worst < 1e-6);
}

TEST_CASE("cauchy_eval") {
    DiscSetup d;
    auto v = cauchy_eval(d.E, 0, 0.3, 0);
    CHECK(std::abs(v[0] - 0.3) < 1e-13);
    CHECK(std::abs(v[1] - 0.09) < 1e-13);
    v = cauchy_eval(d.E, 0, 0.3, 1);
    CHECK(std::abs(v[0] - 1.0) < 1e-13);
    CHECK(std::abs(v[1] - 0.6) < 1e-13);
    v = cauchy_eval(d.E, 0, 0.7, 0);
    CHECK(std::abs(v[1] - 0.49) < 1e-10);
    try {
        cauchy_eval(d.E, 1, 0.1, 0);
        FAIL("expected NotProjective");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotProjective);
    }
    // finite-difference self-consistency
    const cplx z(0.2, -0.3);
    const double h = 1e-5;
    auto p = cauchy_eval(d.E, 0, z + h, 0), m = cauchy_eval(d.E, 0, z - h, 0), d1 = cauchy_eval(d.E, 0, z, 1);
    CHECK(std::abs((p[1] - m[1]) / (2 * h) - d1[1]) < 1e-6);
}

TEST_CASE("rectified chart geometry") {
    DiscSetup d;
    auto chart = rectified_coords(d.E, 0, 0.0, 0.5, 0.4);
    const double delta = 1e-3;
    auto x = chart.to_chart(1.0 - delta);
    CHECK(std::abs(x[0]) < 1e-14);
    CHECK(x[1] == doctest::Approx(delta).epsilon(1e-9));
    auto y = chart.to_chart(std::polar(1.0, 0.1));
    CHECK(std::abs(y[1]) < 1e-13);
    CHECK(y[0] == doctest::Approx(std::sin(0.1)).epsilon(1e-13));
    double worst = 0.0;
    for (int a = 0; a < 20; ++a)
        for (int b = 0; b < 20; ++b) {
            const double x1 = -0.5 + a / 19.0, x2 = 0.4 * b / 19.0;
            auto back = chart.to_chart(chart.from_chart(x1, x2));
            worst = std::max({worst, std::abs(back[0] - x1), std::abs(back[1] - x2)});
        }
    CHECK(worst < 1e-10);
    try {
        rectified_coords(d.E, 0, 0.0, 1.2, 0.4);
        FAIL("expected ChartTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ChartTooLarge);
    }
}

TEST_CASE("near_boundary_eval") {
    DiscSetup d;
    auto chart = rectified_coords(d.E, 0, 0.0, 0.5, 0.4);
    for (double x1 : {0.0, 0.2, -0.37}) {
        const double x2 = 1e-3;
        const cplx z = chart.from_chart(x1, x2);
        auto v0 = near_boundary_eval(d.E, chart, x1, x2, 0);
        CHECK(std::abs(v0[0] - z) < 1e-6);
        CHECK(std::abs(v0[1] - z * z) < 1e-6);
        auto v1 = near_boundary_eval(d.E, chart, x1, x2, 1);
        CHECK(std::abs(v1[0] - 1.0) < 1e-5);
        CHECK(std::abs(v1[1] - 2.0 * z) < 1e-5);
        auto v2 = near_boundary_eval(d.E, chart, x1, x2, 2);
        CHECK(std::abs(v2[1] - 2.0) < 1e-5);
        auto b0 = near_boundary_eval(d.E, chart, x1, 0.0, 1);
        CHECK(std::abs(b0[1] - 2.0 * chart.from_chart(x1, 0.0)) < 1e-5);
    }
    // overlap with the Cauchy evaluator
    auto vn = near_boundary_eval(d.E, chart, 0.1, 0.3, 1);
    auto vc = cauchy_eval(d.E, 0, chart.from_chart(0.1, 0.3), 1);
    CHECK(std::abs(vn[1] - vc[1]) < 1e-8);
    try {
        near_boundary_eval(d.E, chart, 0.9, 0.1, 0);
        FAIL("expected ChartExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ChartExceeded);
    }
}

TEST_CASE("induced embedding") {
    DiscSetup d;
    auto P = projector_P(*d.lam);
    auto same = induced_embedding(d.E, d.lam, P, 1e-8, 0, {0.0, cplx(0.3, 0.2)});
    for (int k = 0; k < 2; ++k) CHECK((same.eta(k) - d.E.eta(k)).sup_norm() < 1e-13);

    SurfaceSpec s;
    s.series = {1.0, 0.025};
    s.grid = d.grid;
    auto lp = std::make_shared<const DnMap>(pushforward_dn(normalize_length(s, kTwoPi)));
    auto Pp = projector_P(*lp);
    auto Ep = induced_embedding(d.E, lp, Pp, 1e-8, 0, {0.0, cplx(0.5, 0.1), cplx(-0.6, -0.4)});
    const double t = dn_distance(*d.lam, *lp);
    for (int k = 0; k < 2; ++k) CHECK((Ep.eta(k) - d.E.eta(k)).cm_norm(1) < 50 * t);
}
