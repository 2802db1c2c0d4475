#include <doctest.h>

#include <cmath>

#include "vpfp/lowfreq.hpp"
#include "vpfp/quadrature.hpp"

using namespace vpfp;

namespace {
double max_abs(const MatC& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
}  // namespace

TEST_SUITE("lowfreq_picard") {

TEST_CASE("cutoff profile") {
    const double R = 0.5;
    CHECK(cutoff_chi(R / 2, R, Cutoff::Low) == 1.0);
    CHECK(cutoff_chi(3 * R, R, Cutoff::Low) == 0.0);
    CHECK(cutoff_chi(R / 2, R, Cutoff::High) == 0.0);
    double prev = 1.0;
    for (double xi : linspace(0.0, 3.0, 301)) {
        const double lo = cutoff_chi(xi, R, Cutoff::Low), hi = cutoff_chi(xi, R, Cutoff::High);
        CHECK(lo + hi == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(lo <= prev + 1e-15);
        prev = lo;
    }
    CHECK(cutoff_chi(1.5 * R, R, Cutoff::Low) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("first iterate is the cut-off fluid semigroup") {
    auto b = build_basis(8);
    const double R = 0.5;
    const std::vector<double> ts{0.0, 0.5, 2.0};
    for (double xi : {0.05, 0.8}) {
        const auto it = iterate_low(0, xi, ts, b, R);
        const double chi = cutoff_chi(xi, R, Cutoff::Low);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const MatC ref = chi * semigroup_blocks(Kind::B1, xi, ts[i], b).dense();
            CHECK(max_abs(it[0].I[i].dense() - ref) < 1e-10);
        }
    }
}

TEST_CASE("iterates vanish where chi_1 does") {
    auto b = build_basis(6);
    const auto it = iterate_low(2, 1.0, {0.5, 1.0}, b, 0.5);
    for (const auto& k : it)
        for (std::size_t i = 0; i < k.I.size(); ++i) {
            CHECK(k.I[i].norm() == 0.0);
            CHECK(k.J[i].norm() == 0.0);
        }
}

TEST_CASE("remainder starts at zero and closes the sum") {
    auto b = build_basis(10);
    const std::vector<double> ts{0.0, 0.3, 1.0, 4.0};
    for (double xi : {0.02, 0.3, 0.7}) {
        const auto res = solve_low(3, xi, ts, b, 0.5);
        for (int k = 0; k <= 3; ++k) {
            CHECK(res.remainders[k].V[0].norm() == 0.0);
            for (std::size_t i = 0; i < ts.size(); ++i) {
                BlockOp U = BlockOp::zero(b);
                for (int j = 0; j <= k; ++j) U += res.iterates[j].I[i] + res.iterates[j].J[i];
                const double scale = std::max(1.0, res.G_L[i].norm());
                CHECK(max_abs((U + res.remainders[k].V[i]).dense() - res.G_L[i].dense()) < 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("separately computed remainder agrees with the joint solve") {
    auto b = build_basis(8);
    const std::vector<double> ts{0.5, 2.0};
    const auto res = solve_low(2, 0.1, ts, b, 0.5);
    const auto V = remainder_low(2, 0.1, ts, b, 0.5);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(max_abs(V.V[i].dense() - res.remainders[2].V[i].dense()) < 1e-10);
}

TEST_CASE("iterates decay like e^{-t/2}") {
    auto b = build_basis(8);
    const auto ts = linspace(5.0, 30.0, 6);
    const auto it = iterate_low(1, 0.1, ts, b, 0.5);
    for (int k = 0; k <= 1; ++k) {
        std::vector<double> ly;
        for (std::size_t i = 0; i < ts.size(); ++i) ly.push_back(std::log(it[k].I[i].norm_xi(0.1) / std::pow(ts[i], k)));
        const double slope = fit_line(ts, ly).slope;
        MESSAGE("k = " << k << " slope " << slope);
        CHECK(slope <= -0.5 + 0.05);
    }
}

TEST_CASE("ladder exponents in |xi|") {
    auto b = build_basis(10);
    const auto f = fit_low_ladder(2, 1.0, logspace(1e-2, 1e-1, 6), b, 0.5);
    for (int k = 0; k <= 2; ++k) {
        CHECK(std::abs(f.J_exp[k] - 2 * k) <= 0.2);
        CHECK(std::abs(f.I_exp[k] - (2 * k - 1)) <= 0.2);
        CHECK(f.V_exp[k] >= 2 * k + 1 - 0.2);
    }
}

}
