#include <doctest.h>

#include <cmath>
#include <random>

#include "vpfp/nonlinear.hpp"

using namespace vpfp;

namespace {
SimConfig small_config() {
    SimConfig c;
    c.max_degree = 4;
    c.radius = 60.0;
    c.k_max = 15.0;
    return c;
}
}  // namespace

TEST_SUITE("nonlinear_vpfp") {

TEST_CASE("Poisson field of a radial Gaussian") {
    RadialSolver s(small_config());
    const auto& r = s.grid().r;
    const int i00 = s.axis().index(0, 0);
    MatR phys = MatR::Zero(r.size(), s.nax());
    for (std::size_t i = 0; i < r.size(); ++i) phys(i, i00) = std::exp(-0.5 * r[i] * r[i]);
    PhaseState st{0.0, s.to_fourier(phys)};
    const VecR E = s.poisson_field(st);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < 0.5 || r[i] > 20.0) continue;
        // shell oracle r^{-2} int_0^r s^2 e^{-s^2/2} ds
        const double ref = (std::sqrt(M_PI / 2) * std::erf(r[i] / std::sqrt(2.0)) - r[i] * std::exp(-0.5 * r[i] * r[i])) /
                           (r[i] * r[i]);
        worst = std::max(worst, std::abs(E(i) - ref) / std::abs(ref));
    }
    MESSAGE("worst relative field error " << worst);
    CHECK(worst <= 0.01);
}

TEST_CASE("nonlinear term has no density component") {
    RadialSolver s(small_config());
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01;
    const int i00 = s.axis().index(0, 0);
    for (int trial = 0; trial < 3; ++trial) {
        MatR phys(s.grid().r.size(), s.nax());
        for (Eigen::Index i = 0; i < phys.rows(); ++i)
            for (Eigen::Index j = 0; j < phys.cols(); ++j)
                phys(i, j) = n01(rng) * std::exp(-0.01 * s.grid().r[i] * s.grid().r[i]);
        const MatC H = s.nonlinear_term(s.to_fourier(phys));
        CHECK(H.col(i00).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("zero field gives zero nonlinear term") {
    RadialSolver s(small_config());
    const int i01 = s.axis().index(0, 1), i10 = s.axis().index(1, 0);
    MatR phys = MatR::Zero(s.grid().r.size(), s.nax());
    for (std::size_t i = 0; i < s.grid().r.size(); ++i) {
        const double r = s.grid().r[i];
        phys(i, i01) = std::exp(-0.5 * r * r);
        phys(i, i10) = r * std::exp(-0.5 * r * r);
    }
    CHECK(s.nonlinear_term(s.to_fourier(phys)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("density-only state: H = Phi' rho v1 sqrt M") {
    RadialSolver s(small_config());
    const auto& r = s.grid().r;
    const int i00 = s.axis().index(0, 0), i01 = s.axis().index(0, 1);
    MatR phys = MatR::Zero(r.size(), s.nax());
    for (std::size_t i = 0; i < r.size(); ++i) phys(i, i00) = std::exp(-0.5 * r[i] * r[i]);
    const MatC c = s.to_fourier(phys);
    const VecR E = s.poisson_field(PhaseState{0.0, c});
    const MatR H = s.to_physical(s.nonlinear_term(c));
    double peak = 0.0, err = 0.0, other = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double ref = E(i) * phys(i, i00);
        peak = std::max(peak, std::abs(ref));
        err = std::max(err, std::abs(std::abs(H(i, i01)) - std::abs(ref)));
        for (int j = 0; j < s.nax(); ++j)
            if (j != i01) other = std::max(other, std::abs(H(i, j)));
    }
    MESSAGE("peak " << peak << " error " << err << " other columns " << other);
    CHECK(err <= 1e-6 * peak);
    CHECK(other <= 1e-6 * peak);
}

TEST_CASE("zero data stays zero") {
    RadialSolver s(small_config());
    const auto tr = evolve(s, s.zero_state(), 1.0, 0.1, 0.5);
    for (const auto& snap : tr.snapshots) CHECK(snap.coeffs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("linear evolution matches the mode semigroup") {
    SimConfig c = small_config();
    c.linear_only = true;
    RadialSolver s(c);
    const PhaseState init = s.initial_state();
    const auto tr = evolve(s, init, 2.0, 0.05, 1.0);
    const PhaseState& last = tr.snapshots.back();
    const auto& ax = s.axis();
    const auto& k = s.grid().k;
    for (std::size_t j : {std::size_t(1), k.size() / 20, k.size() / 5, k.size() / 2}) {
        const VecC cart = ax.T.transpose().cast<cxd>() * init.coeffs.row(j).transpose();
        const VecC ref = ax.T.cast<cxd>() * (semigroup(assemble(Kind::B, k[j], s.basis()), last.t).result * cart);
        CHECK((ref - last.coeffs.row(j).transpose()).norm() <= 1e-6 * ref.norm());
    }
    for (std::size_t i = 1; i < tr.energy.size(); ++i) CHECK(tr.energy[i] <= tr.energy[i - 1] * (1 + 1e-12));
}

TEST_CASE("mass is conserved by the nonlinear flow") {
    SimConfig c = small_config();
    c.delta0 = 0.1;
    RadialSolver s(c);
    const auto tr = evolve(s, s.initial_state(), 2.0, 0.05, 0.5);
    CHECK(tr.max_mass_drift_rate <= 1e-10 * std::max(1.0, std::abs(tr.mass.front())));
}

TEST_CASE("Picard iteration") {
    SimConfig c = small_config();
    c.picard_t_end = 2.0;
    {
        RadialSolver s(c);
        const auto one = picard_solve(s, s.initial_state(), 1);
        REQUIRE(one.distances.size() == 1);
        CHECK(one.distances[0] == doctest::Approx(one.sup_weighted_norms[0]).epsilon(1e-14));
    }
    {
        SimConfig l = c;
        l.linear_only = true;
        RadialSolver s(l);
        const auto tr = picard_solve(s, s.initial_state(), 2);
        REQUIRE(tr.distances.size() >= 2);
        CHECK(tr.distances[1] == 0.0);
    }
    {
        RadialSolver s(c);
        const auto tr = picard_solve(s, s.initial_state(), 4);
        MESSAGE("contraction ratio " << tr.contraction_ratio);
        CHECK(tr.contraction_ratio < 0.1);
    }
}

}
