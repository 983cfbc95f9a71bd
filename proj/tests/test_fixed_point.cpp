#include <doctest.h>

#include <cmath>

#include "teichstab/fixed_point.hpp"

using namespace teichstab;

namespace {

std::vector<VecX> unit_samples(int n) {
    std::vector<VecX> s;
    for (int k = 0; k < n; ++k) s.push_back(VecX::Constant(1, static_cast<double>(k) / (n - 1)));
    return s;
}

VecX one(double v) { return VecX::Constant(1, v); }

}  // namespace

TEST_CASE("shifted linear graph") {
    const double t = 1e-3;
    FixedPointProblem p;
    p.f = [](const VecX& x) { return x; };
    p.F_ref = [](const VecX& x, const VecX& y) { return VecX(y - x); };
    p.H = [t](const VecX& x, const VecX& y) { return VecX(y - x - VecX::Constant(1, t)); };
    p.samples = unit_samples(21);
    const auto r = fixed_point_solve(p);
    for (std::size_t k = 0; k < r.h.size(); ++k) CHECK(std::abs(r.h[k][0] - p.samples[k][0] - t) < 1e-14);
    CHECK(std::abs(r.c1_error - t) < 1e-9);
    CHECK(r.contraction < 1.0);
}

TEST_CASE("unperturbed problem returns f") {
    FixedPointProblem p;
    p.f = [](const VecX& x) { return VecX(x.array().square()); };
    p.F_ref = [](const VecX& x, const VecX& y) { return VecX(y - x.array().square().matrix()); };
    p.H = p.F_ref;
    p.samples = unit_samples(11);
    const auto r = fixed_point_solve(p);
    CHECK(r.c0_error == 0.0);
    CHECK(r.c1_error < 1e-8);
}

TEST_CASE("sine perturbation of a parabola") {
    const double t = 1e-3;
    FixedPointProblem p;
    p.f = [](const VecX& x) { return one(x[0] * x[0]); };
    p.F_ref = [](const VecX& x, const VecX& y) { return one(y[0] - x[0] * x[0]); };
    p.H = [t](const VecX& x, const VecX& y) { return one(y[0] - x[0] * x[0] - t * std::sin(x[0])); };
    p.samples = unit_samples(41);
    const auto r = fixed_point_solve(p);
    double c0 = 0.0;
    for (std::size_t k = 0; k < r.h.size(); ++k) {
        const double x = p.samples[k][0];
        CHECK(std::abs(r.h[k][0] - x * x - t * std::sin(x)) < 1e-14);
        c0 = std::max(c0, t * std::abs(std::sin(x)));
    }
    CHECK(std::abs(r.c0_error - c0) < 1e-12);
    // closed form: max(t sup|sin|, t sup|cos|) = t on [0, 1]
    CHECK(r.c1_error <= 2.0 * t);
    CHECK(r.c1_error >= 0.99 * t);
    CHECK(std::abs(r.eval(one(0.5))[0] - 0.25 - t * std::sin(0.5)) < 1e-14);
}

TEST_CASE("coupled two dimensional system") {
    const double t = 1e-2;
    FixedPointProblem p;
    p.f = [](const VecX& x) { return VecX(x); };
    p.F_ref = [](const VecX& x, const VecX& y) { return VecX(y - x); };
    p.H = [t](const VecX& x, const VecX& y) {
        VecX r(2);
        r << y[0] - x[0] - t * std::sin(y[1]), y[1] - x[1] - t * y[0] * y[0];
        return r;
    };
    for (double a : {0.0, 0.5, 1.0})
        for (double b : {0.0, 0.5, 1.0}) p.samples.push_back((VecX(2) << a, b).finished());
    const auto r = fixed_point_solve(p);
    for (std::size_t k = 0; k < r.h.size(); ++k) CHECK(p.H(p.samples[k], r.h[k]).norm() < 1e-13);
    CHECK(r.contraction < 0.1);
    CHECK(r.c1_error < 5 * t);
}

TEST_CASE("failures are classified") {
    FixedPointProblem p;
    p.f = [](const VecX& x) { return x; };
    p.F_ref = [](const VecX& x, const VecX& y) { return VecX(y - x); };
    p.samples = unit_samples(3);
    // H_y = -2 against the reference slope 1: iteration map has slope 3
    p.H = [](const VecX& x, const VecX& y) { return VecX(-2.0 * y + x + VecX::Constant(1, 0.1)); };
    try {
        fixed_point_solve(p);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ContractionFailed);
    }
    // slope ratio 0.999 converges too slowly for 20 iterations
    p.H = [](const VecX& x, const VecX& y) { return VecX(0.001 * (y - x) - VecX::Constant(1, 1e-3)); };
    p.max_iter = 20;
    try {
        fixed_point_solve(p);
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoConvergence);
    }
    p.F_ref = [](const VecX&, const VecX& y) { return VecX(0.0 * y); };
    CHECK_THROWS_AS(fixed_point_solve(p), Error);
}
