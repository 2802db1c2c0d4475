#pragma once

#include <functional>

#include "vpfp/types.hpp"

namespace vpfp {

struct ExpmResult {
    MatC value;
    double backward_error = 0.0;  // estimate, relative
    int squarings = 0;
};

// Scaling and squaring with the degree-13 Pade approximant (Higham 2005).
// Throws NumericalError when the backward-error estimate exceeds `tol`.
ExpmResult expm_pade13(const MatC& A, double tol = 1e-8);
inline MatC expm(const MatC& A) { return expm_pade13(A).value; }

// Action e^{tG} X for a matrix-free G given by `apply` (Y = G X), using
// truncated Taylor steps; `norm1` is an upper bound for ||G||_1.
using LinearMap = std::function<MatC(const MatC&)>;
MatC expmv(const LinearMap& apply, double norm1, double t, const MatC& X);

// Largest singular value of T given forward and adjoint actions, by power
// iteration on T^* T starting from x0.
double power_norm(const LinearMap& fwd, const LinearMap& adj, VecC x0, int max_iter = 60,
                  double rtol = 1e-7);

}  // namespace vpfp
