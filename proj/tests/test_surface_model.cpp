#include <doctest.h>

#include <chrono>
#include <cmath>

#include "teichstab/surface_model.hpp"

using namespace teichstab;

namespace {

std::shared_ptr<const DnMap> disc_map(const BoundaryGrid& g) { return std::make_shared<const DnMap>(disc_dn(g)); }

Embedding disc_embedding(const BoundaryGrid& g, std::vector<std::function<cplx(cplx)>> fs) {
    auto lam = disc_map(g);
    std::vector<HoloTrace> tr;
    for (auto& f : fs) tr.push_back({BoundaryFn::sample(g, [&](double l) { return f(std::polar(1.0, l)); }), lam});
    return Embedding(tr, lam);
}

}  // namespace

TEST_CASE("metric_in_chart examples") {
    BoundaryGrid g(256, kTwoPi);
    auto E1 = disc_embedding(g, {[](cplx z) { return z; }});
    for (double v : metric_in_chart(E1, 0, {0.0, cplx(0.3, -0.4)})) CHECK(std::abs(v - 1.0) < 1e-13);
    auto E2 = disc_embedding(g, {[](cplx z) { return z; }, [](cplx z) { return z * z; }});
    CHECK(std::abs(metric_in_chart(E2, 0, {0.5})[0] - 2.0) < 1e-12);

    // E = (z, F(z)) with F = z + 0.1 z^2; rho = 1 + |F'|^2 over z and 1 + |F'|^-2 over F.
    auto F = [](cplx z) { return z + 0.1 * z * z; };
    auto E3 = disc_embedding(g, {[](cplx z) { return z; }, F});
    for (double re : {-0.6, -0.2, 0.0, 0.3, 0.6})
        for (double im : {-0.5, 0.0, 0.4}) {
            const cplx z(re, im);
            const double dF = std::norm(1.0 + 0.2 * z);
            CHECK(std::abs(metric_in_chart(E3, 0, {z})[0] - (1.0 + dF)) < 1e-8);
            CHECK(std::abs(metric_in_chart(E3, 1, {F(z)})[0] - (1.0 + 1.0 / dF)) < 1e-8);
        }
    // near the boundary through a rectified chart
    auto ch = rectified_coords(E3, 0, 0.3, 0.3, 0.5);
    for (double x2 : {1e-3, 0.0}) {
        const cplx z = ch.from_chart(0.1, x2);
        CHECK(std::abs(metric_in_chart(E3, ch, {{0.1, x2}})[0] - (1.0 + std::norm(1.0 + 0.2 * z))) < 1e-8);
    }
}

TEST_CASE("surface model on the disc") {
    BoundaryGrid g(128, kTwoPi);
    SurfaceModel M(disc_embedding(g, {[](cplx z) { return z; }, [](cplx z) { return z * z; }}));
    CHECK(M.n_charts() == 16);
    CHECK(M.chart_for(0.01) == 0);
    CHECK(M.chart_for(kTwoPi - 0.01) == 0);
    for (cplx z : {cplx(0.1, 0.2), cplx(0.9, 0.05), cplx(-0.2, -0.97)}) {
        const auto p = M.eval(z);
        CHECK(std::abs(p.xi[1] - z * z) < 1e-9);
        CHECK(std::abs(p.dxi[1] - 2.0 * z) < 1e-8);
        CHECK(std::abs(M.rho(z) - 1.0 - 4.0 * std::norm(z)) < 1e-8);
        CHECK(M.inside(z));
    }
    CHECK(!M.inside(cplx(1.02, 0.0)));
    CHECK(M.inside(cplx(0.999, 0.0)));
    CHECK(!M.inside(cplx(1.3, 0.2)));

}

TEST_CASE("flat disc geodesics are inward radial segments") {
    BoundaryGrid g(128, kTwoPi);
    SurfaceModel M(disc_embedding(g, {[](cplx z) { return z; }}));
    const auto& ch = M.chart(3);
    GeodesicPatch gp(M.chart_metric(3), 0.2, 0.3);
    for (double mu : {-0.19, 0.0, 0.12})
        for (double r : {0.0, 0.05, 0.3}) {
            const Vec2 x = gp.x(mu, r);
            const double l = ch.l_tilde_inv(mu);
            const cplx z = ch.from_chart(x[0], x[1]);
            CHECK(std::abs(z - (1.0 - r) * std::polar(1.0, l)) < 1e-9);
            double m2 = 0, r2 = 0;
            REQUIRE(gp.invert(x, m2, r2));
            CHECK(std::abs(m2 - mu) < 1e-12);
            CHECK(std::abs(r2 - r) < 1e-12);
        }
}
