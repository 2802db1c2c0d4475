#include <doctest.h>

#include <cmath>

#include "vpfp/assembly.hpp"
#include "vpfp/kernel.hpp"
#include "vpfp/modes.hpp"
#include "vpfp/quadrature.hpp"

using namespace vpfp;

namespace {
double G0(double t, const Vec3& x, const Vec3& v, const Vec3& y, const Vec3& u) {
    auto m = [](const Vec3& w) { return std::pow(2 * M_PI, -0.75) * std::exp(-(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]) / 4); };
    return std::exp(2 * t) * m(v) * eval_G1(t, x, v, y, u).value / m(u);
}
QuadRule window(double lo, double hi, int panels, int n) {
    std::vector<double> e;
    for (int i = 0; i <= panels; ++i) e.push_back(lo + (hi - lo) * i / panels);
    return composite_legendre(e, n);
}
}  // namespace

TEST_SUITE("fp_kernel") {

TEST_CASE("variance function") {
    const double t = 1e-3;
    CHECK(variance_D(t) / std::pow(t, 4) == doctest::Approx(1.0 / 12).epsilon(1e-2));
    CHECK(variance_D(1.0) == doctest::Approx(0.0327560).epsilon(2e-5));
    const double h = 1e-3;
    CHECK((variance_D(50 + h) - variance_D(50 - h)) / (2 * h) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(variance_derivative(50.0) == doctest::Approx(0.5).epsilon(1e-6));
    // series and closed form agree across the switch
    CHECK(variance_D(0.999e-3) == doctest::Approx(variance_D(1.001e-3) * std::pow(0.999 / 1.001, 4)).epsilon(1e-3));
}

TEST_CASE("G0 is a probability kernel") {
    // G0 factorizes over coordinates: integrate the (x1, v1) factor and cube it
    for (double t : {0.5, 2.0}) {
        const Vec3 z{0, 0, 0};
        const double g000 = G0(t, z, z, z, z);
        const QuadRule qv = window(-12.0, 12.0, 48, 8);
        double I2 = 0.0;
        for (std::size_t i = 0; i < qv.x.size(); ++i) {
            const double v1 = qv.x[i], c = v1 * std::tanh(t / 2);
            const QuadRule qx = window(c - 10.0, c + 10.0, 200, 8);
            double s = 0.0;
            for (std::size_t j = 0; j < qx.x.size(); ++j) s += qx.w[j] * G0(t, {qx.x[j], 0, 0}, {v1, 0, 0}, z, z);
            I2 += qv.w[i] * s;
        }
        const double mass = I2 * I2 * I2 / (g000 * g000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("G1 solves the damped kinetic Fokker-Planck equation") {
    const Vec3 x{0.3, -0.2, 0.1}, v{0.5, 0.1, -0.3}, y{0, 0, 0}, u{0.2, 0.0, 0.1};
    const double t = 1.0, h = 1e-3;
    auto g = [&](double tt, Vec3 xx, Vec3 vv) { return eval_G1(tt, xx, vv, y, u).value; };
    const double g0 = g(t, x, v);
    const double dt = (g(t + h, x, v) - g(t - h, x, v)) / (2 * h);
    double adv = 0.0, lap = 0.0, vv = 0.0;
    for (int d = 0; d < 3; ++d) {
        Vec3 xp = x, xm = x, vp = v, vm = v;
        xp[d] += h;
        xm[d] -= h;
        vp[d] += h;
        vm[d] -= h;
        adv += v[d] * (g(t, xp, v) - g(t, xm, v)) / (2 * h);
        lap += (g(t, x, vp) - 2 * g0 + g(t, x, vm)) / (h * h);
        vv += v[d] * v[d];
    }
    const double Lg = lap - 0.25 * vv * g0 + 1.5 * g0;
    const double res = dt + adv - Lg + 2 * g0;
    const double scale = std::abs(dt) + std::abs(adv) + std::abs(lap) + std::abs(g0);
    CHECK(std::abs(res) / scale < 1e-4);
}

TEST_CASE("symmetries") {
    const Vec3 x{0.3, -0.2, 0.1}, v{0.5, 0.1, -0.3}, y{-0.1, 0.2, 0.0}, u{0.2, 0.0, 0.1};
    auto neg = [](Vec3 a) { return Vec3{-a[0], -a[1], -a[2]}; };
    const double a = eval_G1(0.7, x, v, y, u).value, b = eval_G1(0.7, y, neg(v), x, neg(u)).value;
    CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
    const Vec3 xi{1.3, -0.4, 0.2};
    const cxd p = eval_G1_hat(0.7, xi, v, u), q = eval_G1_hat(0.7, xi, u, v);
    CHECK(std::abs(p - q) <= 1e-14 * std::abs(p));
}

TEST_CASE("xi = 0 reduces to the x-integral of G1") {
    // both sides factorize over coordinates; v = v1 e1 and the 2D slices carry the rest
    const double t = 1.0, v1 = 0.6, cc = std::tanh(t / 2);
    const Vec3 o{0, 0, 0};
    const QuadRule qu = window(-12.0, 12.0, 48, 8);
    auto slice_x = [&](double w) {
        double s = 0.0;
        for (std::size_t i = 0; i < qu.x.size(); ++i) {
            const QuadRule qx = window((w + qu.x[i]) * cc - 6.0, (w + qu.x[i]) * cc + 6.0, 60, 8);
            double sx = 0.0;
            for (std::size_t j = 0; j < qx.x.size(); ++j)
                sx += qx.w[j] * eval_G1(t, {qx.x[j], 0, 0}, {w, 0, 0}, o, {qu.x[i], 0, 0}).value;
            s += qu.w[i] * sx;
        }
        return s;
    };
    auto slice_hat = [&](double w) {
        double s = 0.0;
        for (std::size_t i = 0; i < qu.x.size(); ++i) s += qu.w[i] * std::abs(eval_G1_hat(t, o, {w, 0, 0}, {qu.x[i], 0, 0}));
        return s;
    };
    const double c2 = std::pow(eval_G1(t, o, o, o, o).value, 2.0);
    const double d2 = std::pow(std::abs(eval_G1_hat(t, o, o, o)), 2.0);
    // Ghat is the kernel of e^{tA(xi)}: the plain x-transform of G1, no (2 pi)^{-3/2}
    const double sx0 = slice_x(0.0), sh0 = slice_hat(0.0);
    const double lhs = slice_hat(v1) * sh0 * sh0 / d2;
    const double rhs = slice_x(v1) * sx0 * sx0 / c2;
    MESSAGE("u-integrated Ghat / x,u-integrated G1 = " << lhs / rhs);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
}

TEST_CASE("Hermite matrix of the Fourier kernel") {
    auto b = build_basis(8);
    const MatC I = MatC::Identity(b->dimension(), b->dimension());
    Eigen::JacobiSVD<MatC> s0(hermite_matrix_of_G1_hat(1e-3, 1.0, *b) - I);
    CHECK(s0.singularValues()[0] <= 0.1);
    for (double t : {0.5, 1.0, 3.0}) {
        Eigen::JacobiSVD<MatC> s(hermite_matrix_of_G1_hat(t, 1.0, *b));
        CHECK(s.singularValues()[0] <= std::exp(-2 * t) * (1 + 1e-8));
        const MatC E = semigroup_blocks(Kind::A, 1.0, t, b).dense();
        CHECK((hermite_matrix_of_G1_hat(t, 1.0, *b) - E).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("short and long time limit forms") {
    const Vec3 o{0, 0, 0};
    {
        const double t = 1e-2, sx = std::pow(t, 1.5), sv = std::sqrt(t);
        double lo = 1e300, hi = 0.0;
        for (int p = 0; p < 10; ++p) {
            const double a = 0.3 * p - 1.3, b = 0.17 * p - 0.6;
            const Vec3 x{a * sx, 0.5 * b * sx, 0.2 * sx}, v{b * sv, 0.3 * sv, -0.2 * a * sv}, u{0.1 * sv, -0.4 * b * sv, 0.0};
            const double r = eval_G1(t, x, v, o, u).value / kolmogorov_limit(t, x, v, o, u);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(hi / lo - 1.0 < 0.05);
    }
    {
        const double t = 20.0, sx = std::sqrt(t);
        double lo = 1e300, hi = 0.0;
        for (int p = 0; p < 10; ++p) {
            const double a = 0.2 * p - 1.0;
            const Vec3 x{a * sx, 0.3 * sx, -0.1 * a * sx}, v{0.3 * a, 0.2, -0.1}, u{-0.2, 0.1 * a, 0.3};
            const double r = eval_G1(t, x, v, o, u).value / heat_limit(t, x, v, o, u);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        CHECK(hi / lo - 1.0 < 0.05);
    }
}

TEST_CASE("convolution with separable data") {
    SeparableSource none;
    const auto z = convolve_G1(1.0, none, {1.0, 2.0}, {{0, 0, 0}});
    CHECK(z.value.norm() == 0.0);

    SeparableSource src;
    src.radial = [](double r) { return std::pow(1 + r * r, -2.0); };
    src.velocity = [](const Vec3& u) { return std::pow(1 + std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]), -3.0); };
    const auto r = linspace(5.0, 40.0, 36);
    const auto c = convolve_G1(1.0, src, r, {{0, 0, 0}}, 12);
    std::vector<double> prof(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) prof[i] = c.value(i, 0);
    const DecayFit f = fit_decay("conv", r, prof, 5.0, 40.0);
    MESSAGE("(1+|x|^2) exponent " << 0.5 * f.exponent_x);
    CHECK(0.5 * f.exponent_x >= 1.7);
}

TEST_CASE("velocity gradient of the convolution gains t^{-1/2} for data with a jump") {
    // w jumps across u1 = 0; smooth data has a bounded gradient at t = 0.
    // The tail is stretched so that w is flat on the diffusion scale sqrt(2t) <= 0.45.
    SeparableSource src;
    src.radial = [](double r) { return std::pow(1 + r * r, -2.0); };
    src.velocity = [](const Vec3& u) {
        return u[0] > 0 ? std::pow(1 + 0.1 * std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]), -3.0) : 0.0;
    };
    const auto ts = logspace(1e-3, 1e-1, 5);
    std::vector<double> lt, lg;
    for (double t : ts) {
        const auto c = convolve_G1(t, src, {0.5}, {{0, 0, 0}, {0.0, 0.5, 0.0}}, 16);
        lt.push_back(std::log(t));
        lg.push_back(std::log(c.grad_v_norm.maxCoeff()));
    }
    const double slope = fit_line(lt, lg).slope;
    MESSAGE("slope " << slope);
    CHECK(std::abs(slope + 0.5) <= 0.1);
}

}
