#include <doctest.h>

#include <cmath>

#include "vpfp/assembly.hpp"
#include "vpfp/lowfreq.hpp"
#include "vpfp/quadrature.hpp"

using namespace vpfp;

TEST_SUITE("green_assembly") {

TEST_CASE("Gaussian is self-dual") {
    const auto k = linspace(0.0, 12.0, 2401);
    std::vector<cxd> g;
    for (double kk : k) g.push_back(std::exp(-0.5 * kk * kk));
    const std::vector<double> x{0.25, 0.5, 1.0, 2.0, 3.0, 5.0};
    const auto h = radial_reconstruct(k, g, x);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(h.value[i] - std::exp(-0.5 * x[i] * x[i])) < 1e-8);
}

TEST_CASE("zero symbol") {
    const auto k = linspace(0.0, 5.0, 101);
    const auto h = radial_reconstruct(k, std::vector<cxd>(k.size(), 0.0), {1.0, 10.0});
    for (const auto& v : h.value) CHECK(v == cxd(0.0));
}

TEST_CASE("smooth compactly supported symbol decays fast") {
    const double R = AssemblyConfig{}.R;
    const auto k = linspace(0.0, 2 * R, 2001);
    std::vector<cxd> g;
    for (double kk : k) g.push_back(cutoff_chi(kk, R, Cutoff::Low));
    const auto x = linspace(10.0, 80.0, 29);
    const auto h = radial_reconstruct(k, g, x);
    // direct quadrature oracle at four probes
    std::vector<double> e;
    for (int i = 0; i <= 400; ++i) e.push_back(2 * R * i / 400.0);
    const QuadRule q = composite_legendre(e, 8);
    for (std::size_t i : {0u, 4u, 8u, 12u}) {
        double s = 0.0;
        for (std::size_t j = 0; j < q.x.size(); ++j)
            s += q.w[j] * q.x[j] * std::sin(q.x[j] * x[i]) * cutoff_chi(q.x[j], R, Cutoff::Low);
        const double ref = std::pow(2 * M_PI, -1.5) * 4 * M_PI / x[i] * s;
        CHECK(std::abs(h.value[i].real() - ref) < 1e-10);
    }
    std::vector<double> prof;
    for (const auto& v : h.value) prof.push_back(std::abs(v));
    const DecayFit f = fit_decay("chi", x, prof, 10.0, 80.0);
    MESSAGE("exponent " << f.exponent_x << " floor hit " << f.super_algebraic);
    CHECK(f.exponent_x >= 6.0);
}

TEST_CASE("synthetic fits") {
    const auto x = linspace(5.0, 50.0, 46);
    std::vector<double> p;
    for (double r : x) p.push_back(std::pow(1 + r * r, -2.0));
    const DecayFit f = fit_decay("P0", x, p, 5.0, 50.0);
    CHECK(f.exponent_x == doctest::Approx(4.0).epsilon(0.0025));
    CHECK(f.residual < 1e-10);
    CHECK(!f.super_algebraic);

    const auto t = linspace(1.0, 10.0, 10);
    std::vector<double> v;
    for (double s : t) v.push_back(3.0 * std::exp(-0.25 * s));
    CHECK(fit_rate("P0", t, v).rate_t == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("noise below the error estimate ends the fit") {
    const auto x = linspace(5.0, 50.0, 46);
    std::vector<double> p, err(x.size(), 1e-6);
    for (double r : x) p.push_back(std::exp(-r));
    const DecayFit f = fit_decay("P0", x, p, 5.0, 50.0, 1e-9, &err);
    CHECK(f.super_algebraic);
    CHECK(f.points < int(x.size()));
}

TEST_CASE("low and high parts add up to the full response") {
    AssemblyConfig cfg;
    cfg.max_degree = 6;
    cfg.grid = make_mode_grid(1e-3, 2.0, 30.0, 12, 12, 4);
    auto b = build_basis(cfg.max_degree);
    const auto ax = build_axisymmetric(*b);
    for (Data d : {Data::Isotropic, Data::Microscopic}) {
        const auto full = mode_response(1.0, Part::Full, d, cfg, b, ax);
        const auto lo = mode_response(1.0, Part::Low, d, cfg, b, ax);
        const auto hi = mode_response(1.0, Part::High, d, cfg, b, ax);
        for (std::size_t i = 0; i < full.k.size(); ++i) {
            CHECK((lo.cart[i] + hi.cart[i] - full.cart[i]).norm() < 1e-8 * std::max(1e-3, full.cart[i].norm()));
            CHECK((lo.sph[i] + hi.sph[i] - full.sph[i]).norm() < 1e-8 * std::max(1e-3, full.sph[i].norm()));
        }
    }
}

TEST_CASE("short-time profile is the mollifier") {
    AssemblyConfig cfg;
    cfg.max_degree = 6;
    const double s = cfg.sigma;
    const auto r = linspace(0.01, 0.5, 50);
    const Profiles p = assemble_green(1e-3, Part::Full, Data::Isotropic, r, cfg);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double m = std::pow(2 * M_PI * s * s, -1.5) * std::exp(-0.5 * r[i] * r[i] / (s * s));
        num += r[i] * r[i] * std::pow(p.P0[i] - m, 2);
        den += r[i] * r[i] * m * m;
    }
    MESSAGE("relative L2 distance " << std::sqrt(num / den));
    CHECK(std::sqrt(num / den) <= 0.05);
}

}
