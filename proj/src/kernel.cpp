#include "vpfp/kernel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

namespace {

// Coefficients of the exponent groups at time t.
struct Coef {
    double rho, one_m_rho2, c, D, alpha, beta, rhop, gamma, a;
};

Coef coef(double t) {
    Coef k;
    k.rho = std::exp(-t);
    k.one_m_rho2 = -std::expm1(-2.0 * t);
    k.c = std::tanh(0.5 * t);
    k.D = variance_D(t);
    k.alpha = k.one_m_rho2 / (8.0 * k.D);
    k.beta = (1.0 + k.rho * k.rho) / (4.0 * k.one_m_rho2);
    k.rhop = 2.0 * k.rho / (1.0 + k.rho * k.rho);
    k.gamma = k.one_m_rho2 / (4.0 * (1.0 + k.rho * k.rho));
    k.a = 2.0 * k.D / k.one_m_rho2;
    return k;
}

double literal_prefactor_G1(double D) { return std::pow(2.0 * kPi, -6) * std::pow(kPi / std::sqrt(D), 3); }
double literal_prefactor_G1_hat(double one_m_rho2) {
    return std::pow(2.0 * kPi, -3) * std::pow(4.0 / one_m_rho2, 1.5);
}

double sq(double x) { return x * x; }

}  // namespace

VarianceFunction variance(double t) {
    if (!(t > 0.0)) throw UsageError("variance: t must be > 0");
    return {t, variance_D(t)};
}

double variance_D(double t) {
    if (t <= 0.0) return 0.0;
    if (t < 1e-3) {
        static const double c[6] = {1.0 / 12, -1.0 / 12, 17.0 / 360, -7.0 / 360, 43.0 / 6720, -107.0 / 60480};
        double s = 0.0;
        for (int k = 5; k >= 0; --k) s = s * t + c[k];
        return s * t * t * t * t;
    }
    const double e1 = -std::expm1(-t);       // 1 - e^{-t}
    const double e2 = -std::expm1(-2.0 * t); // 1 - e^{-2t}
    return 0.5 * (t * e2 - 2.0 * e1 * e1);
}

double variance_derivative(double t) {
    if (t < 1e-3) {
        static const double c[6] = {1.0 / 12, -1.0 / 12, 17.0 / 360, -7.0 / 360, 43.0 / 6720, -107.0 / 60480};
        double s = 0.0;
        for (int k = 5; k >= 0; --k) s = s * t + (k + 4) * c[k];
        return s * t * t * t;
    }
    const double r = std::exp(-t);
    return 0.5 * (-std::expm1(-2.0 * t) + 2.0 * t * r * r - 4.0 * (-std::expm1(-t)) * r);
}

const KernelNormalization& kernel_normalization() {
    static const KernelNormalization norm = [] {
        KernelNormalization n;
        const double t = 1.0;
        const Coef k = coef(t);
        // one velocity dimension, source at y = 0, u = 0
        QuadRule gh = gauss_hermite(80);
        const double sqrtM0 = std::pow(2.0 * kPi, -0.25);
        const double halfw = 14.0 / std::sqrt(2.0 * k.alpha);
        QuadRule gl = gauss_legendre(120, -halfw, halfw);
        double m1 = 0.0, mh = 0.0;
        for (std::size_t i = 0; i < gh.x.size(); ++i) {
            const double v = gh.x[i];
            // gh weight e^{-v^2/2}; sqrt(M1(v)) = (2pi)^{-1/4} e^{-v^2/4}
            const double w = gh.w[i] * std::exp(0.5 * v * v) * sqrtM0 * std::exp(-0.25 * v * v);
            const double vel = std::exp(-k.beta * sq(k.rhop * v) - k.gamma * v * v - 2.0 * t / 3.0);
            double xint = 0.0;
            for (std::size_t j = 0; j < gl.x.size(); ++j)
                xint += gl.w[j] * std::exp(-k.alpha * sq(gl.x[j]));  // x - v c, translated
            m1 += w * vel * xint;
            mh += w * vel;
        }
        m1 *= std::exp(2.0 * t / 3.0) / sqrtM0;
        mh *= std::exp(2.0 * t / 3.0) / sqrtM0;
        n.g1 = 1.0 / (literal_prefactor_G1(k.D) * m1 * m1 * m1);
        n.g1_hat = 1.0 / (literal_prefactor_G1_hat(k.one_m_rho2) * mh * mh * mh);
        return n;
    }();
    return norm;
}

KernelEval eval_G1(double t, const Vec3& x, const Vec3& v, const Vec3& y, const Vec3& u) {
    if (!(t > 0.0)) throw UsageError("eval_G1: t must be > 0");
    const Coef k = coef(t);
    double e = -2.0 * t;
    for (int d = 0; d < 3; ++d) {
        e -= k.alpha * sq(x[d] - y[d] - (v[d] + u[d]) * k.c);
        e -= k.beta * sq(k.rhop * v[d] - u[d]);
        e -= k.gamma * v[d] * v[d];
    }
    KernelEval r{t, x, y, v, u, 0.0, false};
    if (e < -745.0) {
        r.underflow = true;
        return r;
    }
    r.value = kernel_normalization().g1 * literal_prefactor_G1(k.D) * std::exp(e);
    return r;
}

cxd eval_G1_hat(double t, const Vec3& xi, const Vec3& v, const Vec3& u) {
    if (!(t > 0.0)) throw UsageError("eval_G1_hat: t must be > 0");
    const Coef k = coef(t);
    double re = -2.0 * t, im = 0.0;
    for (int d = 0; d < 3; ++d) {
        im -= xi[d] * (v[d] + u[d]) * k.c;
        re -= k.a * xi[d] * xi[d];
        re -= k.beta * sq(k.rhop * v[d] - u[d]);
        re -= k.gamma * v[d] * v[d];
    }
    const double pre = kernel_normalization().g1_hat * literal_prefactor_G1_hat(k.one_m_rho2);
    return pre * std::exp(cxd(re, im));
}

std::array<cxd, 3> grad_v_G1_hat(double t, const Vec3& xi, const Vec3& v, const Vec3& u) {
    const Coef k = coef(t);
    const cxd g = eval_G1_hat(t, xi, v, u);
    std::array<cxd, 3> out;
    for (int d = 0; d < 3; ++d) {
        cxd e(-2.0 * k.beta * k.rhop * (k.rhop * v[d] - u[d]) - 2.0 * k.gamma * v[d], -xi[d] * k.c);
        out[d] = e * g;
    }
    return out;
}

double kolmogorov_limit(double t, const Vec3& x, const Vec3& v, const Vec3& y, const Vec3& u) {
    double e = -2.0 * t;
    for (int d = 0; d < 3; ++d) {
        e -= 3.0 * sq(x[d] - y[d] - (v[d] + u[d]) * t / 2.0) / (t * t * t);
        e -= sq(v[d] - u[d]) / (4.0 * t);
    }
    return std::exp(e) / std::pow(t, 6);
}

double heat_limit(double t, const Vec3& x, const Vec3& v, const Vec3& y, const Vec3& u) {
    double e = -2.0 * t;
    for (int d = 0; d < 3; ++d) {
        e -= sq(x[d] - y[d] - (v[d] + u[d])) / (4.0 * t);
        e -= (v[d] * v[d] + u[d] * u[d]) / 4.0;
    }
    return std::exp(e) / std::pow(t, 1.5);
}

namespace {

// h_n(z) = He_n(z) / ((2 pi)^{1/4} sqrt(n!)) for complex z.
void hermite_poly(int n, cxd z, cxd* out) {
    out[0] = std::pow(2.0 * kPi, -0.25);
    if (n >= 1) out[1] = z * out[0];
    for (int k = 1; k < n; ++k) out[k + 1] = (z * out[k] - std::sqrt(double(k)) * out[k - 1]) / std::sqrt(double(k + 1));
}

// One-dimensional factor K[a][b] = int int psi_a(v) g(v,u) psi_b(u) dv du with
// g = exp(-i xi c (v+u) - a xi^2 - beta (rho' v - u)^2 - gamma v^2 - 2t/3).
MatC hermite_factor_1d(const Coef& k, double t, double xi, int N) {
    Eigen::Matrix2d S;
    S << 2.0 * (0.25 + k.beta * k.rhop * k.rhop + k.gamma), -2.0 * k.beta * k.rhop,
        -2.0 * k.beta * k.rhop, 2.0 * (0.25 + k.beta);
    const Eigen::Matrix2d Sigma = S.inverse();
    const Eigen::Matrix2d Lc = Sigma.llt().matrixL();
    const Eigen::Vector2cd bvec(cxd(0.0, -xi * k.c), cxd(0.0, -xi * k.c));
    const Eigen::Vector2cd mu = Sigma.cast<cxd>() * bvec;
    const cxd shift_const = 0.5 * (bvec.transpose() * mu)(0);
    const cxd pref = std::exp(shift_const - k.a * xi * xi - 2.0 * t / 3.0) * Lc.determinant();
    const int Q = N + 3;
    QuadRule gh = gauss_hermite(Q);
    MatC K = MatC::Zero(N + 1, N + 1);
    std::vector<cxd> ha(N + 1), hb(N + 1);
    for (int i = 0; i < Q; ++i)
        for (int j = 0; j < Q; ++j) {
            const double z0 = gh.x[i], z1 = gh.x[j];
            const cxd vv = Lc(0, 0) * z0 + mu(0);
            const cxd uu = Lc(1, 0) * z0 + Lc(1, 1) * z1 + mu(1);
            hermite_poly(N, vv, ha.data());
            hermite_poly(N, uu, hb.data());
            const double w = gh.w[i] * gh.w[j];
            for (int a = 0; a <= N; ++a)
                for (int b = 0; b <= N; ++b) K(a, b) += w * ha[a] * hb[b];
        }
    return pref * K;
}

}  // namespace

MatC hermite_matrix_of_G1_hat(double t, double xi_mag, const BasisSpec& basis) {
    if (!(t > 0.0)) throw UsageError("hermite_matrix_of_G1_hat: t must be > 0");
    const Coef k = coef(t);
    const int N = basis.max_degree();
    const MatC K1 = hermite_factor_1d(k, t, xi_mag, N);
    const MatC K0 = hermite_factor_1d(k, t, 0.0, N);
    const double pre = kernel_normalization().g1_hat * literal_prefactor_G1_hat(k.one_m_rho2);
    const int d = basis.dimension();
    MatC M(d, d);
    for (int i = 0; i < d; ++i) {
        const MultiIndex a = basis.multi_index(i);
        for (int j = 0; j < d; ++j) {
            const MultiIndex b = basis.multi_index(j);
            M(i, j) = pre * K1(a.a1, b.a1) * K0(a.a2, b.a2) * K0(a.a3, b.a3);
        }
    }
    return M;
}

double grad_v_schur_norm(double t, double xi_mag, const std::vector<Vec3>& v_probes) {
    if (!(t > 0.0)) throw UsageError("grad_v_schur_norm: t must be > 0");
    const Coef k = coef(t);
    const double pre = kernel_normalization().g1_hat * literal_prefactor_G1_hat(k.one_m_rho2);
    QuadRule gh = gauss_hermite(48);
    const double s = 1.0 / std::sqrt(2.0 * k.beta);
    const double kap = k.rho / k.one_m_rho2;
    double best = 0.0;
    for (const Vec3& v : v_probes) {
        double acc = 0.0;
        for (std::size_t i = 0; i < gh.x.size(); ++i)
            for (std::size_t j = 0; j < gh.x.size(); ++j)
                for (std::size_t l = 0; l < gh.x.size(); ++l) {
                    const double w[3] = {gh.x[i] * s, gh.x[j] * s, gh.x[l] * s};
                    double e2 = sq(xi_mag * k.c);
                    for (int d = 0; d < 3; ++d) {
                        // u = rho' v + w, so rho' v - u = -w
                        double re = kap * w[d] - 2.0 * k.gamma * v[d];
                        e2 += re * re;
                    }
                    acc += gh.w[i] * gh.w[j] * gh.w[l] * std::sqrt(e2);
                }
        double vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        acc *= std::pow(s, 3) * pre * std::exp(-k.a * xi_mag * xi_mag - k.gamma * vv - 2.0 * t);
        best = std::max(best, acc);
    }
    return best;
}

namespace {

// Radial Gaussian smoothing of s with variance sigma2 per dimension, tabulated
// with derivative for cubic Hermite interpolation.
class RadialSmoothing {
public:
    RadialSmoothing(const std::function<double(double)>& s, double sigma2, double r_max) {
        sigma_ = std::sqrt(sigma2);
        dr_ = 0.01;
        const int n = int(std::ceil(r_max / dr_)) + 2;
        S_.resize(n);
        dS_.resize(n);
        const double pw = std::min(sigma_, 0.5);
        QuadRule base = gauss_legendre(8);
        const double norm = 1.0 / std::sqrt(2.0 * kPi * sigma2);
        for (int i = 0; i < n; ++i) {
            const double r = i * dr_;
            const double lo = std::max(0.0, r - 10.0 * sigma_), hi = r + 10.0 * sigma_;
            const int np = std::max(1, int(std::ceil((hi - lo) / pw)));
            const double h = (hi - lo) / np;
            double acc = 0.0, dacc = 0.0;
            for (int p = 0; p < np; ++p)
                for (int q = 0; q < 8; ++q) {
                    const double x = lo + h * (p + 0.5 * (base.x[q] + 1.0));
                    const double w = 0.5 * h * base.w[q];
                    const double sv = s(x);
                    const double em = std::exp(-sq(r - x) / (2.0 * sigma2));
                    const double ep = std::exp(-sq(r + x) / (2.0 * sigma2));
                    double K, dK;
                    if (r * x / sigma2 < 1e-6) {
                        // r -> 0 limits of (em - ep)/r and its r-derivative
                        K = 2.0 * x / sigma2 * std::exp(-x * x / (2.0 * sigma2));
                        dK = 0.0;
                    } else {
                        K = (em - ep) / r;
                        dK = (-(r - x) / sigma2 * em + (r + x) / sigma2 * ep) / r - K / r;
                    }
                    acc += w * sv * x * K;
                    dacc += w * sv * x * dK;
                }
            S_[i] = norm * acc;
            dS_[i] = norm * dacc;
        }
    }

    void eval(double r, double& S, double& dS) const {
        double u = r / dr_;
        int i = int(u);
        if (i >= int(S_.size()) - 1) {
            S = 0.0;
            dS = 0.0;
            return;
        }
        double s = u - i;
        double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        S = h00 * S_[i] + h10 * dr_ * dS_[i] + h01 * S_[i + 1] + h11 * dr_ * dS_[i + 1];
        double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1, d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
        dS = (d00 * S_[i] + d01 * S_[i + 1]) / dr_ + d10 * dS_[i] + d11 * dS_[i + 1];
    }

private:
    double sigma_, dr_;
    std::vector<double> S_, dS_;
};

QuadRule split_window(double centre, double half, int n) {
    double lo = centre - half, hi = centre + half;
    std::vector<double> edges{lo};
    if (lo < 0.0 && hi > 0.0) edges.push_back(0.0);
    edges.push_back(hi);
    return composite_legendre(edges, n);
}

}  // namespace

ConvolutionResult convolve_G1(double t, const SeparableSource& src, const std::vector<double>& r,
                              const std::vector<Vec3>& v, int n_gl) {
    if (!(t > 0.0)) throw UsageError("convolve_G1: t must be > 0");
    ConvolutionResult out;
    out.t = t;
    out.r = r;
    out.v = v;
    out.value = MatR::Zero(r.size(), v.size());
    out.grad_v_norm = MatR::Zero(r.size(), v.size());
    if (!src.radial || !src.velocity) return out;
    const Coef k = coef(t);
    const double sigma2 = 1.0 / (2.0 * k.alpha);
    const double su = 1.0 / std::sqrt(2.0 * k.beta);
    double vmax = 0.0, rmax = 0.0;
    for (const auto& vv : v) vmax = std::max(vmax, std::sqrt(sq(vv[0]) + sq(vv[1]) + sq(vv[2])));
    for (double rr : r) rmax = std::max(rmax, rr);
    const double reach = rmax + (2.0 * vmax + 10.0 * su + 1.0) * k.c * std::sqrt(3.0) + 1.0;
    RadialSmoothing S(src.radial, sigma2, reach);
    const double pre = kernel_normalization().g1 * literal_prefactor_G1(k.D) * std::pow(kPi / k.alpha, 1.5);
    parallel_for(v.size(), [&](std::size_t iv) {
        const Vec3& vv = v[iv];
        QuadRule q[3];
        for (int d = 0; d < 3; ++d) q[d] = split_window(k.rhop * vv[d], 9.0 * su, n_gl);
        const double vsq = sq(vv[0]) + sq(vv[1]) + sq(vv[2]);
        for (std::size_t ir = 0; ir < r.size(); ++ir) {
            const Vec3 x{r[ir], 0.0, 0.0};
            double f = 0.0;
            double g[3] = {0, 0, 0};
            for (std::size_t a = 0; a < q[0].x.size(); ++a)
                for (std::size_t b = 0; b < q[1].x.size(); ++b)
                    for (std::size_t c = 0; c < q[2].x.size(); ++c) {
                        const Vec3 u{q[0].x[a], q[1].x[b], q[2].x[c]};
                        const double w = q[0].w[a] * q[1].w[b] * q[2].w[c];
                        double z[3], zz = 0.0, ee = -2.0 * t - k.gamma * vsq;
                        for (int d = 0; d < 3; ++d) {
                            z[d] = x[d] - (vv[d] + u[d]) * k.c;
                            zz += z[d] * z[d];
                            ee -= k.beta * sq(k.rhop * vv[d] - u[d]);
                        }
                        const double wu = src.velocity(u);
                        if (wu == 0.0) continue;
                        const double zn = std::sqrt(zz);
                        double Sv, dS;
                        S.eval(zn, Sv, dS);
                        const double kern = w * std::exp(ee) * wu;
                        f += kern * Sv;
                        for (int d = 0; d < 3; ++d) {
                            double dexp = -2.0 * k.beta * k.rhop * (k.rhop * vv[d] - u[d]) - 2.0 * k.gamma * vv[d];
                            double dz = zn > 0.0 ? -k.c * z[d] / zn : 0.0;
                            g[d] += kern * (dS * dz + Sv * dexp);
                        }
                    }
            out.value(ir, iv) = pre * f;
            out.grad_v_norm(ir, iv) = pre * std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
        }
    });
    return out;
}

}  // namespace vpfp
