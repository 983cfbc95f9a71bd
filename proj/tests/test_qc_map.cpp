#include <doctest.h>

#include <chrono>
#include <cmath>
#include <iostream>

#include "teichstab/qc_map.hpp"

using namespace teichstab;

namespace {

std::shared_ptr<const DnMap> shared(DnMap m) { return std::make_shared<const DnMap>(std::move(m)); }

Embedding disc_identity(const BoundaryGrid& g) {
    auto lam = shared(disc_dn(g));
    return Embedding({{BoundaryFn::sample(g, [](double l) { return std::polar(1.0, l); }), lam}}, lam);
}

}  // namespace

TEST_CASE("teich_bound examples") {
    CHECK(teich_bound(1.0) == 0.0);
    CHECK(std::abs(teich_bound(std::exp(2.0)) - 1.0) < 1e-15);
    CHECK(std::abs(teich_bound(2.0) - 0.34657359027997264) < 1e-15);
    try {
        teich_bound(0.9);
        FAIL("expected InvalidDilatation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidDilatation);
    }
}

TEST_CASE("hausdorff_distance examples") {
    using Cloud = std::vector<std::vector<cplx>>;
    const Cloud a{{0.0}}, b{{1.0}};
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, b) == 1.0);
    Cloud c1, c2;
    for (int k = 0; k < 512; ++k) {
        c1.push_back({std::polar(1.0, kTwoPi * k / 512)});
        c2.push_back({std::polar(1.1, kTwoPi * k / 512)});
    }
    CHECK(std::abs(hausdorff_distance(c1, c2) - 0.1) < 1e-3);
    try {
        hausdorff_distance({}, a);
        FAIL("expected EmptyCloud");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyCloud);
    }
}

TEST_CASE("beltrami_dilatation closed forms") {
    std::vector<cplx> probes{0.0, cplx(0.3, -0.2), cplx(-0.5, 0.4)};
    auto id = beltrami_dilatation([](cplx z) { return z; }, probes);
    CHECK(id.K - 1.0 < 1e-9);
    for (const cplx& m : id.mu) CHECK(std::abs(m) < 1e-12);
    auto third = beltrami_dilatation([](cplx z) { return z + std::conj(z) / 3.0; }, probes);
    for (double k : third.k) CHECK(std::abs(k - 2.0) < 1e-10);
    const double eps = 0.05;
    auto aff = beltrami_dilatation([eps](cplx z) { return z + eps * std::conj(z); }, probes);
    for (const cplx& m : aff.mu) CHECK(std::abs(m - eps) < 1e-10);
    CHECK(std::abs(aff.K - (1 + eps) / (1 - eps)) < 1e-10);
    try {
        beltrami_dilatation([](cplx z) { return std::conj(z); }, probes);
        FAIL("expected OrientationViolated");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OrientationViolated);
    }
}

TEST_CASE("kappa profile plateaus") {
    const double r0 = 0.3;
    CHECK(kappa_profile(0.0, r0) == 1.0);
    CHECK(kappa_profile(r0 / 3, r0) == 1.0);
    CHECK(kappa_profile(2 * r0 / 3, r0) == 0.0);
    CHECK(kappa_profile(r0, r0) == 0.0);
    CHECK(std::abs(kappa_profile(r0 / 2, r0) - 0.5) < 1e-15);
    double prev = 1.0;
    for (int k = 0; k <= 100; ++k) {
        const double v = kappa_profile(r0 / 3 + k * r0 / 300, r0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("identity pipeline") {
    BoundaryGrid g(128, kTwoPi);
    const auto t0 = std::chrono::steady_clock::now();
    auto b = build_alpha(disc_identity(g), disc_identity(g));
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& r = b.report;
    MESSAGE("identity: K-1=" << r.K - 1 << " disp=" << r.displacement << " H=" << r.hausdorff << " r0=" << r.r0
                             << " probes=" << r.n_probes << " discs=" << r.n_interior_discs << " s=" << sec);
    CHECK(r.K - 1.0 <= 1e-6);
    CHECK(r.teich_upper <= 1e-6);
    CHECK(r.displacement <= 1e-8);
    CHECK(r.hausdorff <= 1e-10);
    CHECK(std::abs(r.r0 - 0.2) < 1e-12);
    CHECK(r.distortion_violations == 0);
}
