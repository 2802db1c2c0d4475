#include "vpfp/spherical.hpp"

#include <cmath>

#include "vpfp/quadrature.hpp"

namespace vpfp {

namespace {

// Unnormalized S_l(v) L_n^{(l+1/2)}(rho^2/2) (no Gaussian factor).
double poly_nl(int n, int l, const std::array<double, 3>& v) {
    const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    double s_prev = 1.0, s = v[0];
    double S = 1.0;
    if (l == 1) S = v[0];
    for (int j = 1; j < l; ++j) {
        double next = ((2 * j + 1) * v[0] * s - j * r2 * s_prev) / (j + 1);
        s_prev = s;
        s = next;
        S = s;
    }
    const double x = 0.5 * r2, alpha = l + 0.5;
    double L_prev = 1.0, L = 1.0 + alpha - x;
    if (n == 0) return S;
    for (int m = 1; m < n; ++m) {
        double next = ((2 * m + 1 + alpha - x) * L - (m + alpha) * L_prev) / (m + 1);
        L_prev = L;
        L = next;
    }
    return S * L;
}

double norm_nl(int n, int l) {
    // ||S_l L_n e^{-r^2/4}||^2 = 4 pi/(2l+1) int r^{2l+2} L_n^2 e^{-r^2/2} dr
    //                          = 4 pi/(2l+1) 2^{l+1/2} Gamma(n+l+3/2)/n!
    const double lg = std::lgamma(n + l + 1.5) - std::lgamma(n + 1.0);
    return std::sqrt(4.0 * kPi / (2 * l + 1) * std::pow(2.0, l + 0.5) * std::exp(lg));
}

}  // namespace

int AxisymmetricBasis::index(int n, int l) const {
    for (std::size_t i = 0; i < nl.size(); ++i)
        if (nl[i].first == n && nl[i].second == l) return int(i);
    return -1;
}

double axisymmetric_function(int n, int l, const std::array<double, 3>& v) {
    const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    return poly_nl(n, l, v) * std::exp(-0.25 * r2) / norm_nl(n, l);
}

AxisymmetricBasis build_axisymmetric(const BasisSpec& b) {
    AxisymmetricBasis a;
    const int N = b.max_degree();
    a.max_degree = N;
    for (int deg = 0; deg <= N; ++deg)
        for (int l = deg % 2; l <= deg; l += 2) a.nl.emplace_back((deg - l) / 2, l);
    // projection by tensor Gauss-Hermite: the integrand is a polynomial of degree
    // <= 2N times e^{-|v|^2/2}
    const int q = N + 2;
    const QuadRule gh = gauss_hermite(q);
    std::vector<double> psi((N + 1) * q);
    for (int i = 0; i < q; ++i) {
        hermite_functions(N, gh.x[i], &psi[i * (N + 1)]);
        for (int d = 0; d <= N; ++d) psi[i * (N + 1) + d] *= std::exp(0.25 * gh.x[i] * gh.x[i]);
    }
    const int Q = q * q * q, dim = b.dimension(), R = a.size();
    MatR Phi(R, Q), Psi(dim, Q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            for (int k = 0; k < q; ++k) {
                const int p = (i * q + j) * q + k;
                const double w = gh.w[i] * gh.w[j] * gh.w[k];
                const std::array<double, 3> v{gh.x[i], gh.x[j], gh.x[k]};
                for (int r = 0; r < R; ++r)
                    Phi(r, p) = w * poly_nl(a.nl[r].first, a.nl[r].second, v) / norm_nl(a.nl[r].first, a.nl[r].second);
                for (int c = 0; c < dim; ++c) {
                    const auto& m = b.multi_index(c);
                    Psi(c, p) = psi[i * (N + 1) + m[0]] * psi[j * (N + 1) + m[1]] * psi[k * (N + 1) + m[2]];
                }
            }
    a.T = Phi * Psi.transpose();
    return a;
}

}  // namespace vpfp
