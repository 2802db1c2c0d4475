#pragma once

#include <vector>

namespace vpfp {

struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Hermite rule for the weight e^{-x^2/2} (probabilists' convention),
// normalized so the weights sum to sqrt(2 pi).
QuadRule gauss_hermite(int n);

// Gauss-Legendre rule on [a, b].
QuadRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre over the breakpoints in `edges`.
QuadRule composite_legendre(const std::vector<double>& edges, int n_per_panel);

// Log-spaced grid of n points between lo and hi inclusive.
std::vector<double> logspace(double lo, double hi, int n);
std::vector<double> linspace(double lo, double hi, int n);

// Least-squares line y = a + b x; returns {slope b, intercept a, rms residual}.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vpfp
