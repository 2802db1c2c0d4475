#include <doctest.h>

#include <cmath>
#include <random>

#include "vpfp/basis.hpp"

using namespace vpfp;

TEST_SUITE("velocity_basis") {

TEST_CASE("dimension and degenerate truncation") {
    CHECK_THROWS_AS(build_basis(1), UsageError);
    CHECK(build_basis(2)->dimension() == 10);
    CHECK(build_basis(4)->dimension() == 35);
    CHECK(basis_dimension(16) == 969);
    auto b = build_basis(3);
    CHECK(b->index_of(0, 0, 0) == 0);
    CHECK(b->index_of(1, 0, 0) == 1);
    CHECK(b->index_of(0, 1, 0) == 2);
    CHECK(b->index_of(0, 0, 1) == 3);
    CHECK(b->index_of(4, 0, 0) == -1);
}

TEST_CASE("L on low modes") {
    auto b = build_basis(4);
    const int n = b->dimension();
    auto unit = [&](int i) {
        VelocityVector e = VelocityVector::Zero(n);
        e[i] = 1.0;
        return e;
    };
    CHECK(apply_L(*b, unit(0)).norm() == doctest::Approx(0.0));
    CHECK((apply_L(*b, unit(1)) + unit(1)).norm() == doctest::Approx(0.0));
    const int i2 = b->index_of(2, 0, 0);
    CHECK((apply_L(*b, unit(i2)) + 2.0 * unit(i2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("degree-2 mode is an L eigenfunction in v-space") {
    // (v1^2 - 1) sqrt(M) / sqrt 2 under Delta - |v|^2/4 + 3/2, by central differences
    auto b = build_basis(4);
    const int i2 = b->index_of(2, 0, 0);
    const std::array<double, 3> v{0.7, -0.4, 0.2};
    auto f = [&](std::array<double, 3> w) { return basis_function(*b, i2, w); };
    const double h = 1e-3;
    double lap = 0.0;
    for (int d = 0; d < 3; ++d) {
        auto p = v, m = v;
        p[d] += h;
        m[d] -= h;
        lap += (f(p) - 2 * f(v) + f(m)) / (h * h);
    }
    const double vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    const double Lf = lap - 0.25 * vv * f(v) + 1.5 * f(v);
    CHECK(Lf == doctest::Approx(-2.0 * f(v)).epsilon(1e-5));
    const double closed = (v[0] * v[0] - 1.0) / std::sqrt(2.0) * std::pow(2 * M_PI, -0.75) * std::exp(-vv / 4);
    CHECK(f(v) == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("projections") {
    auto b = build_basis(3);
    VelocityVector s = VelocityVector::Zero(b->dimension()), v1 = s;
    s[0] = 1.0;
    v1[1] = 1.0;
    CHECK((project(*b, s, Proj::P0) - s).norm() == doctest::Approx(0.0));
    CHECK(project(*b, v1, Proj::P0).norm() == doctest::Approx(0.0));
    CHECK((project(*b, v1, Proj::Pm) - v1).norm() == doctest::Approx(0.0));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    VelocityVector f(b->dimension());
    for (int i = 0; i < f.size(); ++i) f[i] = cxd(nd(rng), nd(rng));
    CHECK((project(*b, f, Proj::P2) + project(*b, f, Proj::P3) - f).norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((project(*b, f, Proj::P0) + project(*b, f, Proj::P1) - f).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("sigma norm of sqrt M") {
    auto b = build_basis(3);
    VelocityVector s = VelocityVector::Zero(b->dimension());
    s[0] = 1.0;
    // ||grad sqrt M||^2 = 3/4, ||<v> sqrt M||^2 = 1 + 3
    CHECK(sigma_norm(*b, s) * sigma_norm(*b, s) == doctest::Approx(19.0 / 4.0).epsilon(1e-13));
    CHECK(sigma_norm(*b, VelocityVector::Zero(b->dimension())) == 0.0);
    VelocityVector f = VelocityVector::Random(b->dimension());
    CHECK(sigma_norm(*b, cxd(-2.5, 1.0) * f) == doctest::Approx(std::abs(cxd(-2.5, 1.0)) * sigma_norm(*b, f)));
}

TEST_CASE("weighted inner product") {
    auto b = build_basis(2);
    VelocityVector s = VelocityVector::Zero(b->dimension()), v1 = s;
    s[0] = 1.0;
    v1[1] = 1.0;
    CHECK(std::abs(weighted_inner(s, s, 1.0) - 2.0) < 1e-15);
    CHECK(std::abs(weighted_inner(v1, v1, 0.01) - 1.0) < 1e-15);
    CHECK(std::abs(weighted_inner(s, v1, 0.3)) < 1e-15);
    CHECK_THROWS_AS(weighted_inner(s, s, 0.0), UsageError);
}

TEST_CASE("v multiplication and gradient against the Hermite recurrence") {
    auto b = build_basis(5);
    const std::array<double, 3> v{0.3, -1.1, 0.8};
    const SpMat V1 = mult_v(*b, 0), D2 = grad_v(*b, 1);
    const int i = b->index_of(2, 1, 0);
    VelocityVector e = VelocityVector::Zero(b->dimension());
    e[i] = 1.0;
    const VelocityVector mv = V1.cast<cxd>() * e, gv = D2.cast<cxd>() * e;
    double sv = 0.0, sg = 0.0;
    for (int j = 0; j < b->dimension(); ++j) {
        sv += mv[j].real() * basis_function(*b, j, v);
        sg += gv[j].real() * basis_function(*b, j, v);
    }
    CHECK(sv == doctest::Approx(v[0] * basis_function(*b, i, v)).epsilon(1e-12));
    const double h = 1e-5;
    auto p = v, m = v;
    p[1] += h;
    m[1] -= h;
    CHECK(sg == doctest::Approx((basis_function(*b, i, p) - basis_function(*b, i, m)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("coercivity sampling") {
    auto b = build_basis(6);
    const CoercivityReport r = measure_coercivity(*b, 200, 7);
    CHECK(r.violations == 0);
    CHECK(r.mu_N > 0.0);
    CHECK(r.samples == 200);
}

TEST_CASE("manifest hash is stable and degree dependent") {
    CHECK(build_basis(4)->manifest_hash() == build_basis(4)->manifest_hash());
    CHECK(build_basis(4)->manifest_hash() != build_basis(5)->manifest_hash());
}

}
