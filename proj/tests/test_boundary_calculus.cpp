#include <doctest.h>

#include <cmath>
#include <random>

#include "teichstab/boundary_calculus.hpp"

using namespace teichstab;

namespace {

BoundaryFn real_fn(const BoundaryGrid& g, double (*f)(double)) {
    return BoundaryFn::sample(g, [f](double l) { return cplx(f(l)); });
}

double max_diff(const BoundaryFn& a, const BoundaryFn& b) { return (a - b).sup_norm(); }

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(BoundaryGrid(15, 1.0), Error);
    CHECK_THROWS_AS(BoundaryGrid(8, 1.0), Error);
    CHECK_THROWS_AS(BoundaryGrid(64, -1.0), Error);
    BoundaryGrid g(64, 3.0);
    CHECK(g.max_mode() == 31);
    CHECK(g.basis_dim() == 63);
    CHECK(g.node(32) == doctest::Approx(1.5));
}

TEST_CASE("d_gamma on single modes") {
    BoundaryGrid g(64, kTwoPi);
    CHECK(max_diff(d_gamma(real_fn(g, [](double l) { return std::sin(l); })), real_fn(g, [](double l) { return std::cos(l); })) < 1e-13);
    CHECK(d_gamma(BoundaryFn::constant(g, 1.0)).sup_norm() < 1e-15);
    CHECK(max_diff(d_gamma(real_fn(g, [](double l) { return std::cos(3 * l); })),
                   real_fn(g, [](double l) { return -3 * std::sin(3 * l); })) < 1e-12);
    // non-2pi length scales the wavenumber
    BoundaryGrid h(64, 2.0);
    auto f = BoundaryFn::sample(h, [](double l) { return cplx(std::sin(kPi * l)); });
    auto df = BoundaryFn::sample(h, [](double l) { return cplx(kPi * std::cos(kPi * l)); });
    CHECK(max_diff(d_gamma(f), df) < 1e-12);
}

TEST_CASE("integrate_J") {
    BoundaryGrid g(64, kTwoPi);
    CHECK(max_diff(integrate_J(real_fn(g, [](double l) { return std::cos(l); })), real_fn(g, [](double l) { return std::sin(l); })) < 1e-13);
    CHECK(max_diff(integrate_J(real_fn(g, [](double l) { return std::sin(l); })), real_fn(g, [](double l) { return -std::cos(l); })) < 1e-13);
    try {
        integrate_J(BoundaryFn::constant(g, 1.0));
        FAIL("expected MeanNotZero");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MeanNotZero);
    }
    auto out = integrate_J(real_fn(g, [](double l) { return std::cos(2 * l) + std::sin(5 * l); }));
    CHECK(out.coeff(0) == cplx(0.0));
}

TEST_CASE("round trip and calculus identities") {
    BoundaryGrid g(128, 5.0);
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    std::vector<cplx> v(128);
    for (auto& x : v) x = cplx(nd(rng), nd(rng));
    auto f = BoundaryFn::from_values(g, v);
    auto back = BoundaryFn::from_coeffs(g, f.coeffs());
    for (int j = 0; j < 128; ++j) CHECK(std::abs(back.value(j) - v[j]) < 1e-13);

    // smooth function: J d f = f - mean f, d J f = f on mean zero data
    auto s = BoundaryFn::sample(g, [](double l) { return cplx(std::exp(std::sin(kTwoPi * l / 5.0)), std::cos(2 * kTwoPi * l / 5.0)); });
    auto jd = integrate_J(d_gamma(s));
    CHECK(max_diff(jd, s - BoundaryFn::constant(g, s.mean())) < 1e-12);
    auto s0 = s - BoundaryFn::constant(g, s.mean());
    CHECK(max_diff(d_gamma(integrate_J(s0)), s0) < 1e-12);
}

TEST_CASE("basis coordinates are orthonormal") {
    BoundaryGrid g(32, 3.0);
    for (int idx = 0; idx < g.basis_dim(); ++idx) {
        auto f = BoundaryFn::sample(g, [&](double l) { return cplx(basis_value(g, idx, l)); });
        Eigen::VectorXd a = to_basis(f);
        Eigen::VectorXd e = Eigen::VectorXd::Unit(g.basis_dim(), idx);
        CHECK((a - e).norm() < 1e-13);
        CHECK(f.l2_norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("operator matrices agree with function calculus") {
    BoundaryGrid g(64, kTwoPi);
    auto f = BoundaryFn::sample(g, [](double l) { return cplx(std::cos(l) + 0.5 * std::sin(4 * l), std::sin(2 * l)); });
    CHECK(max_diff(BoundaryOperator::derivative(g).apply(f), d_gamma(f)) < 1e-12);
    CHECK(max_diff(BoundaryOperator::integration(g).apply(f), integrate_J(f)) < 1e-12);
    auto id = BoundaryOperator::identity(g);
    auto d = BoundaryOperator::derivative(g);
    CHECK(((id * d).matrix() - d.matrix()).norm() == 0.0);
    auto dj = d * BoundaryOperator::integration(g);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(g.basis_dim(), g.basis_dim());
    expect(0, 0) = 0.0;
    CHECK((dj.matrix() - expect).norm() < 1e-13);
    // real-linear view acts identically
    CHECK(max_diff(d.as_real_linear().apply(f), d.apply(f)) < 1e-12);
}

TEST_CASE("operator_norm_h1_l2 examples") {
    BoundaryGrid g(258, kTwoPi);  // K = 128
    CHECK(operator_norm_h1_l2(BoundaryOperator::zero(g)) == 0.0);
    CHECK(operator_norm_h1_l2(BoundaryOperator::identity(g)) == doctest::Approx(1.0).epsilon(1e-12));
    auto lam = BoundaryOperator::multiplier(g, [](int k) { return double(k); });
    CHECK(operator_norm_h1_l2(lam) == doctest::Approx(128.0 / std::sqrt(1.0 + 128.0 * 128.0)).epsilon(1e-12));
}

TEST_CASE("operator_norm_h1_l2 is subadditive") {
    BoundaryGrid g(32, 2.0);
    std::mt19937 rng(11);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd a(g.basis_dim(), g.basis_dim()), b(g.basis_dim(), g.basis_dim());
        for (int i = 0; i < a.size(); ++i) {
            a.data()[i] = nd(rng);
            b.data()[i] = nd(rng);
        }
        BoundaryOperator A(g, a), B(g, b);
        CHECK(operator_norm_h1_l2(A + B) <= operator_norm_h1_l2(A) + operator_norm_h1_l2(B) + 1e-12);
    }
}

TEST_CASE("grid mismatch is reported") {
    auto a = BoundaryFn::constant(BoundaryGrid(32, 1.0), 1.0);
    auto b = BoundaryFn::constant(BoundaryGrid(64, 1.0), 1.0);
    try {
        (void)(a + b);
        FAIL("expected GridMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GridMismatch);
    }
}
