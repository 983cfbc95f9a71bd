#include <doctest.h>

#include <cmath>

#include "teichstab/chebyshev.hpp"
#include "teichstab/geodesics.hpp"

using namespace teichstab;

namespace {

ConformalMetric constant_metric(double rho, double a = 1.0, double b = 1.0) {
    return ConformalMetric([rho](const Vec2&) { return rho; }, [](const Vec2&) { return Vec2::Zero(); }, a, b);
}

// Non-flat reference metric used for the perturbation ratio.
ConformalMetric bumpy_metric(double s) {
    return ConformalMetric(
        [s](const Vec2& x) { return (1.0 + s) * (1.0 + 0.3 * x[1] + 0.2 * x[0] * x[0]); },
        [s](const Vec2& x) { return Vec2((1.0 + s) * 0.4 * x[0], (1.0 + s) * 0.3); }, 1.0, 1.0);
}

}  // namespace

TEST_CASE("chebyshev patch reproduces a smooth field and its derivatives") {
    auto fn = [](double x1, double x2) { return std::vector<cplx>{std::exp(cplx(x1, 0.7 * x2)), cplx(x1 * x1 * x2, 0.0)}; };
    ChebyshevPatch p({-0.4, 0.4}, {0.0, 0.6}, 20, 14, 2, fn);
    for (double x1 : {-0.4, -0.13, 0.31})
        for (double x2 : {0.0, 0.22, 0.6}) {
            const auto j = p.eval(x1, x2);
            const cplx e = std::exp(cplx(x1, 0.7 * x2));
            CHECK(std::abs(j.f[0] - e) < 1e-12);
            CHECK(std::abs(j.f1[0] - e) < 1e-10);
            CHECK(std::abs(j.f2[0] - cplx(0, 0.7) * e) < 1e-10);
            CHECK(std::abs(j.f11[0] - e) < 1e-8);
            CHECK(std::abs(j.f12[0] - cplx(0, 0.7) * e) < 1e-8);
            CHECK(std::abs(j.f22[0] + 0.49 * e) < 1e-8);
            CHECK(std::abs(j.f12[1] - 2.0 * x1) < 1e-9);
        }
}

TEST_CASE("flat metric shoots straight normal lines") {
    const auto h = constant_metric(1.0);
    const auto c = shoot_geodesics(h, 0.5);
    for (std::size_t i = 0; i < c.mu.size(); ++i)
        for (std::size_t j = 0; j < c.r.size(); ++j) CHECK((c.x[i][j] - Vec2(c.mu[i], c.r[j])).norm() < 1e-12);
    CHECK(c.max_speed_defect < 1e-12);
}

TEST_CASE("constant conformal factor rescales the depth") {
    const double rho = 2.3;
    const auto h = constant_metric(rho);
    const auto c = shoot_geodesics(h, 0.5);
    for (std::size_t i = 0; i < c.mu.size(); ++i)
        for (std::size_t j = 0; j < c.r.size(); ++j)
            CHECK((c.x[i][j] - Vec2(c.mu[i], c.r[j] / std::sqrt(rho))).norm() < 1e-8);
}

TEST_CASE("non-flat metric keeps unit speed") {
    const auto c = shoot_geodesics(bumpy_metric(0.0), 0.4);
    CHECK(c.max_speed_defect < 1e-8);
    CHECK(c.min_jacobian_ratio > 0.5);
}

TEST_CASE("scaled metric perturbation ratio is stable") {
    const auto base = shoot_geodesics(bumpy_metric(0.0), 0.4);
    const double r2 = bundle_c1_distance(shoot_geodesics(bumpy_metric(1e-2), 0.4), base) / 1e-2;
    const double r3 = bundle_c1_distance(shoot_geodesics(bumpy_metric(1e-3), 0.4), base) / 1e-3;
    CHECK(r2 > 0.0);
    CHECK(std::abs(r2 / r3 - 1.0) < 0.2);
}

TEST_CASE("focusing metric raises a caustic and tall bundles exit") {
    // rho = exp(-8 x1^2 - 4 x2) bends geodesics toward x1 = 0 and crosses them.
    ConformalMetric focus([](const Vec2& x) { return std::exp(8.0 * x[0] * x[0] - 6.0 * x[1]); },
                          [](const Vec2& x) {
                              const double r = std::exp(8.0 * x[0] * x[0] - 6.0 * x[1]);
                              return Vec2(16.0 * x[0] * r, -6.0 * r);
                          },
                          1.0, 5.0);
    CHECK_THROWS_AS(shoot_geodesics(focus, 4.0), Error);
    try {
        shoot_geodesics(focus, 4.0);
    } catch (const Error& e) {
        CHECK((e.kind() == ErrorKind::CausticDetected || e.kind() == ErrorKind::ChartExit));
    }
    ShootOptions o;
    o.mu_extent = 0.2;
    try {
        shoot_geodesics(constant_metric(1.0, 1.0, 0.3), 0.29, o);
        shoot(constant_metric(1.0, 1.0, 0.3), 0.0, 0.5);
        FAIL("expected ChartExit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ChartExit);
    }
}
