#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "vpfp/expm.hpp"
#include "vpfp/modes.hpp"
#include "vpfp/quadrature.hpp"

using namespace vpfp;

TEST_SUITE("mode_operators") {

TEST_CASE("matrix entries") {
    auto b = build_basis(4);
    const double xi = 0.7;
    const MatC B = assemble(Kind::B, xi, b).matrix;
    CHECK(std::abs(B(1, 0) - cxd(0.0, -(xi + 1.0 / xi))) < 1e-14);
    CHECK(std::abs(B(0, 0)) < 1e-15);
    const MatC A = assemble(Kind::A, xi, b).matrix;
    for (int i = 0; i < b->dimension(); ++i)
        CHECK(A(i, i).real() == doctest::Approx(-2.0 - b->multi_index(i).degree()));
    CHECK_THROWS_AS(assemble(Kind::B, 0.0, b), UsageError);
}

TEST_CASE("semigroup at t = 0 and B2 decay") {
    auto b = build_basis(5);
    const auto e0 = semigroup(assemble(Kind::B, 1.3, b), 0.0);
    CHECK((e0.result - MatC::Identity(b->dimension(), b->dimension())).norm() < 1e-14);
    for (double t : {0.1, 1.0, 3.0}) {
        const MatC E = semigroup(assemble(Kind::B2, 2.0, b), t).result;
        Eigen::JacobiSVD<MatC> svd(E);
        CHECK(svd.singularValues()[0] <= std::exp(-t) * (1 + 1e-10));
    }
}

TEST_CASE("contraction in the xi norm") {
    auto b = build_basis(6);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (double xi : {0.05, 0.8, 6.0})
        for (double t : {0.1, 1.0, 10.0}) {
            const BlockOp E = semigroup_blocks(Kind::B, xi, t, b);
            for (int s = 0; s < 5; ++s) {
                VecC f(b->dimension());
                for (int i = 0; i < f.size(); ++i) f[i] = cxd(nd(rng), nd(rng));
                CHECK(weighted_norm(E.apply(f), xi) <= weighted_norm(f, xi) * (1 + 1e-12));
            }
        }
}

TEST_CASE("spectrum of A at xi = 0") {
    const int N = 5;
    auto b = build_basis(N);
    const auto ev = spectrum(assemble(Kind::A, 0.0, b));
    std::map<int, int> count;
    for (const cxd& e : ev) {
        const int n = int(std::lround(-e.real())) - 2;
        CHECK(std::abs(e - cxd(-2.0 - n, 0.0)) < 1e-10);
        ++count[n];
    }
    for (int n = 0; n <= N; ++n) CHECK(count[n] == (n + 1) * (n + 2) / 2);
}

TEST_CASE("B1 spectrum is the fluid dispersion relation") {
    auto b = build_basis(6);
    const double xi = 1.0;
    auto ev = spectrum(assemble(Kind::B1, xi, b));
    REQUIRE(ev.size() == 4);
    const cxd l0(-0.5, -0.5 * std::sqrt(7.0));
    int hits = 0;
    for (const cxd& e : ev)
        hits += std::abs(e - l0) < 1e-10 || std::abs(e - std::conj(l0)) < 1e-10 || std::abs(e + 1.0) < 1e-10;
    CHECK(hits == 4);
}

TEST_CASE("small-xi spectral abscissa near -1/2") {
    auto b = build_basis(8);
    const auto ev = spectrum(assemble(Kind::B, 1e-3, b));
    CHECK(ev.front().real() == doctest::Approx(-0.5).epsilon(1e-2));
}

TEST_CASE("padded semigroup agrees with a longer truncation") {
    auto b = build_basis(6);
    for (double xi : {0.5, 4.0})
        for (double t : {0.3, 2.0}) {
            const MatC E = semigroup_blocks(Kind::A, xi, t, b).dense();
            const MatC E2 = semigroup_blocks(Kind::A, xi, t, b, semigroup_padding(xi, t) + 40).dense();
            CHECK((E - E2).cwiseAbs().maxCoeff() < 1e-12);
        }
}

TEST_CASE("level system against a dense exponential") {
    // two levels, Y1' = D1 Y1 + C Y0
    LevelSystem sys;
    MatC D0(2, 2), D1(2, 2), C(2, 2);
    D0 << -1.0, 0.5, 0.0, -2.0;
    D1 << cxd(-0.5, 1.0), 0.0, 0.3, -1.5;
    C << 1.0, 0.0, cxd(0.0, 2.0), 1.0;
    sys.diag = {D0, D1};
    sys.coupling.push_back({0, 1, C});
    sys.init = {MatC::Identity(2, 2), MatC::Zero(2, 2)};
    MatC G = MatC::Zero(4, 4);
    G.block(0, 0, 2, 2) = D0;
    G.block(2, 2, 2, 2) = D1;
    G.block(2, 0, 2, 2) = C;
    for (bool mf : {false, true}) {
        const auto sol = solve_levels(sys, {0.0, 0.7, 1.9}, mf);
        for (std::size_t i = 0; i < 3; ++i) {
            const double t = std::vector<double>{0.0, 0.7, 1.9}[i];
            const MatC E = expm(t * G);
            CHECK((sol[i][0] - E.block(0, 0, 2, 2)).norm() < 1e-10);
            CHECK((sol[i][1] - E.block(2, 0, 2, 2)).norm() < 1e-10);
        }
    }
}

TEST_CASE("regularization probe") {
    for (double t : {0.05, 0.5, 3.0}) {
        CHECK(scaled_semigroup_norm(2, t) == doctest::Approx(scaled_semigroup_norm_exact(2, t)).epsilon(1e-6));
    }
    const ProbeFit f = semigroup_scaling_probe(0, logspace(1e-2, 1e-1, 4));
    CHECK(std::abs(f.exponent) < 0.1);
    CHECK(coherent_state(200.0, 50).norm() > 0.0);
}

TEST_CASE("Pade exponential against the scalar case and a nilpotent block") {
    MatC N = MatC::Zero(3, 3);
    N(0, 1) = 1.0;
    N(1, 2) = 1.0;
    const MatC E = expm(N);
    CHECK(std::abs(E(0, 2) - 0.5) < 1e-15);
    MatC D = MatC::Zero(2, 2);
    D(0, 0) = cxd(-40.0, 3.0);
    D(1, 1) = 5.0;
    const MatC F = expm(D);
    CHECK(std::abs(F(0, 0) - std::exp(cxd(-40.0, 3.0))) < 1e-25);
    CHECK(std::abs(F(1, 1) - std::exp(5.0)) < 1e-10 * std::exp(5.0));
}

}
