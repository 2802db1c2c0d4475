#pragma once

#include <array>
#include <vector>

#include "vpfp/types.hpp"

namespace vpfp {

// Eigenpairs of B1(xi e1) on the fluid block [sqrt M, v1 sqrt M, v2 sqrt M, v3 sqrt M]:
// psi_k = |xi| a_k sqrt M + b_k v1 sqrt M (k = 0, 1), psi_2 = v2 sqrt M, psi_3 = v3 sqrt M.
struct FluidEigenSystem {
    double xi_mag = 0.0;
    std::array<cxd, 4> lambdas{};
    std::array<cxd, 2> a{}, b{};
    std::array<Eigen::Vector4cd, 4> psi{};
    std::array<std::array<double, 3>, 2> transverse_dirs{{{0, 1, 0}, {0, 0, 1}}};
};

FluidEigenSystem solve_fluid_eigensystem(double xi_mag);

// Same as solve_fluid_eigensystem but chooses the sign of b_k so that it is
// continuous with `prev` (sign-flip tracking along a |xi| grid).
FluidEigenSystem solve_fluid_eigensystem_tracked(double xi_mag, const FluidEigenSystem& prev);

// Spectral sum for e^{t B1(xi)} on the 4x4 fluid block.
Eigen::Matrix4cd fluid_semigroup(const FluidEigenSystem& sys, double t);

// The 4x4 fluid block of B1(xi e1).
Eigen::Matrix4cd fluid_block(double xi_mag);

// Bilinear xi-pairing (f, conj g)_xi on the fluid block.
cxd fluid_pairing(const Eigen::Vector4cd& f, const Eigen::Vector4cd& g, double xi_mag);

}  // namespace vpfp
