#include <doctest.h>

#include <cmath>

#include "vpfp/highfreq.hpp"
#include "vpfp/quadrature.hpp"

using namespace vpfp;

namespace {
double max_abs(const MatC& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
}  // namespace

TEST_SUITE("highfreq_singular") {

TEST_CASE("first iterate is the damped semigroup") {
    auto b = build_basis(8);
    const std::vector<double> ts{0.0, 0.5, 1.5, 3.0};
    const auto it = iterate_high(0, 3.0, ts, b, 0.5);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(max_abs(it[0].I[i].dense() - semigroup_blocks(Kind::A, 3.0, ts[i], b).dense()) < 1e-10);
        CHECK(it[0].I[i].norm() <= std::exp(-2 * ts[i]) * (1 + 1e-10));
    }
}

TEST_CASE("large-t rate of the iterates") {
    for (int j = 0; j <= 2; ++j) {
        // at fixed xi the rate is 2 + O(xi^2); xi = 2R keeps e^{-t xi^2} above underflow up to t = 20
        const auto p = high_rate_probe(j, 1.0, linspace(5.0, 20.0, 6));
        MESSAGE("j = " << j << " rate " << p.exponent);
        CHECK(p.exponent >= 2.0 - 0.1);
    }
}

TEST_CASE("number of terms in W_alpha") {
    CHECK(w_alpha_terms(0) == 8);
    CHECK(w_alpha_terms(1) == 9);
    CHECK(w_alpha_terms(2) == 11);
}

TEST_CASE("contour extraction against the Duhamel hierarchy") {
    auto b = build_basis(8);
    const double xi = 2.5, t = 0.8;
    CHECK(max_abs(high_iterate_contour(0, xi, t, b).dense() - semigroup_blocks(Kind::A, xi, t, b).dense()) < 1e-10);
    // chi_2 = 1 at xi >= 2R, so the hierarchy iterates carry no cutoff factor
    const auto it = iterate_high(2, xi, {t}, b, 0.5);
    for (int j = 0; j <= 2; ++j)
        CHECK(max_abs(high_iterate_contour(j, xi, t, b).dense() - it[j].I[0].dense()) < 1e-8);
}

TEST_CASE("W_alpha is the cut-off sum of contour iterates") {
    auto b = build_basis(6);
    const double xi = 0.8, R = 0.5, t = 0.6;
    const auto W = singular_wave_W_alpha(0, xi, {t}, b, R);
    BlockOp S = BlockOp::zero(b);
    for (int j = 0; j < w_alpha_terms(0); ++j) S += high_iterate_contour(j, xi, t, b);
    S *= cutoff_chi(xi, R, Cutoff::High);
    CHECK(max_abs(W[0].dense() - S.dense()) < 1e-10 * std::max(1.0, S.norm()));
}

TEST_CASE("remainder starts at zero and closes the sum") {
    auto b = build_basis(8);
    const std::vector<double> ts{0.0, 0.5, 1.0, 3.0};
    for (double xi : {0.7, 3.0, 12.0}) {
        for (int k : {0, 3}) {
            const auto s = remainder_high(k, xi, ts, b, 0.5);
            CHECK(s.R[0].norm() == 0.0);
            for (std::size_t i = 0; i < ts.size(); ++i) {
                const double scale = std::max(1.0, s.G_H[i].norm());
                CHECK(max_abs((s.W[i] + s.R[i]).dense() - s.G_H[i].dense()) < 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("G_H is the cut-off full semigroup") {
    auto b = build_basis(8);
    const double xi = 0.8, R = 0.5;
    const auto s = remainder_high(1, xi, {1.0}, b, R);
    const MatC ref = cutoff_chi(xi, R, Cutoff::High) * semigroup_blocks(Kind::B, xi, 1.0, b).dense();
    CHECK(max_abs(s.G_H[0].dense() - ref) < 1e-10);
}

TEST_CASE("small-t scaling of the iterates") {
    for (int j = 1; j <= 2; ++j) {
        const auto p = high_scaling_probe(j, 0, logspace(2e-2, 1e-1, 4), 0.5);
        MESSAGE("j = " << j << " exponent " << p.exponent);
        CHECK(std::abs(p.exponent - j) <= 0.3);
    }
}

}
