#include <doctest.h>

#include <cmath>

#include "vpfp/expm.hpp"
#include "vpfp/fluid.hpp"
#include "vpfp/quadrature.hpp"

using namespace vpfp;

namespace {
// operator norm in ||.||_xi on the fluid block
double xi_norm(const Eigen::Matrix4cd& E, double xi) {
    Eigen::Matrix4cd W = Eigen::Matrix4cd::Identity(), Wi = W;
    W(0, 0) = std::sqrt(1.0 + 1.0 / (xi * xi));
    Wi(0, 0) = 1.0 / W(0, 0).real();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(W * E * Wi);
    return svd.singularValues()[0];
}
}  // namespace

TEST_SUITE("fluid_eigensystem") {

TEST_CASE("eigenvalues") {
    const auto s0 = solve_fluid_eigensystem(1e-8);
    CHECK(std::abs(s0.lambdas[0] - cxd(-0.5, -std::sqrt(3.0) / 2)) < 1e-10);
    CHECK(std::abs(s0.lambdas[1] - cxd(-0.5, std::sqrt(3.0) / 2)) < 1e-10);
    const auto s1 = solve_fluid_eigensystem(1.0);
    CHECK(std::abs(s1.lambdas[0] - cxd(-0.5, -0.5 * std::sqrt(7.0))) < 1e-14);
    CHECK(std::abs(s1.lambdas[2] + 1.0) < 1e-15);
    CHECK(std::abs(s1.lambdas[3] + 1.0) < 1e-15);
}

TEST_CASE("b_0 at small xi") {
    const auto s = solve_fluid_eigensystem(1e-7);
    CHECK(std::abs(s.b[0] * s.b[0] - cxd(0.5, -std::sqrt(3.0) / 6)) < 1e-6);
}

TEST_CASE("eigenvectors") {
    for (double xi : {1e-3, 0.4, 3.0}) {
        const auto s = solve_fluid_eigensystem(xi);
        const Eigen::Matrix4cd B = fluid_block(xi);
        for (int k = 0; k < 4; ++k) CHECK((B * s.psi[k] - s.lambdas[k] * s.psi[k]).norm() < 1e-12 * (1 + xi));
    }
}

TEST_CASE("semigroup") {
    for (double xi : {1e-3, 0.2, 1.0, 5.0}) {
        const auto s = solve_fluid_eigensystem(xi);
        CHECK((fluid_semigroup(s, 0.0) - Eigen::Matrix4cd::Identity()).norm() < 1e-12);
        for (double t : {0.5, 3.0}) {
            const Eigen::Matrix4cd E = fluid_semigroup(s, t);
            CHECK(std::abs(E(2, 2) - std::exp(-t)) < 1e-14);
            CHECK(std::abs(E(3, 3) - std::exp(-t)) < 1e-14);
            // compare in the xi-weighted frame, where the block is well scaled at small xi
            Eigen::Matrix4cd W = Eigen::Matrix4cd::Identity(), Wi = W;
            W(0, 0) = std::sqrt(1.0 + 1.0 / (xi * xi));
            Wi(0, 0) = 1.0 / W(0, 0);
            const MatC F = expm(MatC(t * W * fluid_block(xi) * Wi));
            CHECK((W * E * Wi - F).norm() < 1e-10);
        }
    }
}

TEST_CASE("xi-norm decay e^{-t/2} with a uniform constant below 2R") {
    double C = 0.0;
    for (double xi : logspace(1e-3, 1.0, 12)) {
        const auto s = solve_fluid_eigensystem(xi);
        for (double t : linspace(0.25, 40.0, 160)) C = std::max(C, xi_norm(fluid_semigroup(s, t), xi) * std::exp(0.5 * t));
    }
    MESSAGE("measured C = " << C);
    // measured about 1.73, set by the non-normal fluid block near xi = 0
    CHECK(C < 2.0);
}

TEST_CASE("sign tracking keeps b_k continuous") {
    auto prev = solve_fluid_eigensystem(1e-3);
    for (double xi : logspace(1.1e-3, 10.0, 200)) {
        const auto cur = solve_fluid_eigensystem_tracked(xi, prev);
        CHECK(std::abs(cur.b[0] - prev.b[0]) < 0.2);
        prev = cur;
    }
}

}
