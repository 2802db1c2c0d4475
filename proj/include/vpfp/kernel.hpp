#pragma once

#include <array>
#include <functional>
#include <vector>

#include "vpfp/basis.hpp"
#include "vpfp/types.hpp"

namespace vpfp {

using Vec3 = std::array<double, 3>;

struct VarianceFunction {
    double t = 0.0;
    double value = 0.0;
};

// D(t) = (t(1-e^{-2t}) - 2(1-e^{-t})^2)/2, Taylor series below t = 1e-3.
VarianceFunction variance(double t);
double variance_D(double t);
double variance_derivative(double t);

// Correction factors applied to the literal kernel prefactors
// (2 pi)^{-6} (pi/sqrt D)^3 for G1 and (2 pi)^{-3} (4/(1-e^{-2t}))^{3/2} for its
// Fourier transform; fixed once by the unit-mass condition on G0.
struct KernelNormalization {
    double g1 = 1.0;
    double g1_hat = 1.0;
};
const KernelNormalization& kernel_normalization();

struct KernelEval {
    double t = 0.0;
    Vec3 x{}, y{}, v{}, u{};
    double value = 0.0;
    bool underflow = false;
};

KernelEval eval_G1(double t, const Vec3& x, const Vec3& v, const Vec3& y, const Vec3& u);
cxd eval_G1_hat(double t, const Vec3& xi, const Vec3& v, const Vec3& u);
// Gradient in v of the Fourier kernel.
std::array<cxd, 3> grad_v_G1_hat(double t, const Vec3& xi, const Vec3& v, const Vec3& u);

// Short and long time limit forms (without normalization constants).
double kolmogorov_limit(double t, const Vec3& x, const Vec3& v, const Vec3& y, const Vec3& u);
double heat_limit(double t, const Vec3& x, const Vec3& v, const Vec3& y, const Vec3& u);

// <psi_a | e^{tA(xi e1)} | psi_b> from the kernel, by exact Gauss-Hermite
// quadrature on a complex-shifted Gaussian, one velocity dimension at a time.
MatC hermite_matrix_of_G1_hat(double t, double xi_mag, const BasisSpec& basis);

// sup over the probe velocities of int |grad_v G1_hat(t, xi, v; u)| du.
double grad_v_schur_norm(double t, double xi_mag, const std::vector<Vec3>& v_probes);

// Separable source g0(y, u) = s(|y|) w(u).
struct SeparableSource {
    std::function<double(double)> radial;
    std::function<double(const Vec3&)> velocity;
};

struct ConvolutionResult {
    double t = 0.0;
    std::vector<double> r;   // x = r e1
    std::vector<Vec3> v;     // velocity probes
    MatR value;              // value(i_r, i_v)
    MatR grad_v_norm;        // |grad_v (G1 * g0)|
};

// (G1(t) * g0)(r e1, v) on the given probes; u integral by tensor
// Gauss-Legendre split at the coordinate planes, y integral through a
// tabulated radial Gaussian smoothing of s.
ConvolutionResult convolve_G1(double t, const SeparableSource& src, const std::vector<double>& r,
                              const std::vector<Vec3>& v, int n_gl = 16);

}  // namespace vpfp
