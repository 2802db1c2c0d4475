#include "vpfp/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "vpfp/types.hpp"

namespace vpfp {

namespace {

// Golub-Welsch for a symmetric Jacobi matrix with zero diagonal.
QuadRule golub_welsch(int n, const std::vector<double>& offdiag, double mu0) {
    MatR J = MatR::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        J(i, i + 1) = offdiag[i];
        J(i + 1, i) = offdiag[i];
    }
    Eigen::SelfAdjointEigenSolver<MatR> es(J);
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        r.x[i] = es.eigenvalues()(i);
        double q = es.eigenvectors()(0, i);
        r.w[i] = mu0 * q * q;
    }
    // symmetric rules: clean the centre node
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

}  // namespace

QuadRule gauss_hermite(int n) {
    if (n < 1) throw UsageError("gauss_hermite: n must be >= 1");
    std::vector<double> b(n > 1 ? n - 1 : 0);
    for (int i = 0; i + 1 < n; ++i) b[i] = std::sqrt(double(i + 1));
    return golub_welsch(n, b, std::sqrt(2.0 * kPi));
}

QuadRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw UsageError("gauss_legendre: n must be >= 1");
    std::vector<double> off(n > 1 ? n - 1 : 0);
    for (int i = 0; i + 1 < n; ++i) {
        double k = i + 1;
        off[i] = k / std::sqrt(4.0 * k * k - 1.0);
    }
    QuadRule r = golub_welsch(n, off, 2.0);
    double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (int i = 0; i < n; ++i) {
        r.x[i] = c + h * r.x[i];
        r.w[i] *= h;
    }
    return r;
}

QuadRule composite_legendre(const std::vector<double>& edges, int n_per_panel) {
    QuadRule base = gauss_legendre(n_per_panel);
    QuadRule r;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        double a = edges[p], b = edges[p + 1];
        double h = 0.5 * (b - a), c = 0.5 * (b + a);
        for (int i = 0; i < n_per_panel; ++i) {
            r.x.push_back(c + h * base.x[i]);
            r.w.push_back(h * base.w[i]);
        }
    }
    return r;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw UsageError("fit_line: need >= 2 matching points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

}  // namespace vpfp
