#pragma once

#include <vector>

#include "vpfp/modes.hpp"

namespace vpfp {

enum class Cutoff { Low, High };

// chi_1 = 1 - chi_R (Low) or chi_2 = chi_R (High); chi_R rises from 0 at R to
// 1 at 2R through the normalized integral of the bump exp(-1/(s(1-s))).
double cutoff_chi(double xi_mag, double R, Cutoff which);

struct LowFreqIterate {
    int k = 0;
    double xi_mag = 0.0;
    std::vector<double> t_grid;
    std::vector<BlockOp> I;  // fluid-supported
    std::vector<BlockOp> J;  // P3-supported
};

struct Remainder {
    int k = 0;
    double xi_mag = 0.0;
    std::vector<double> t_grid;
    std::vector<BlockOp> V;
    std::vector<VecC> Z_grad_e1;  // e1 component of grad_x Z_k as a row functional
};

struct LowFreqResult {
    std::vector<LowFreqIterate> iterates;  // k = 0..k_max
    std::vector<Remainder> remainders;     // k = 0..k_max
    std::vector<BlockOp> G_L;              // chi_1 e^{tB}, directly integrated
};

// Iterates, remainders V_k = G_L - U_k (each from its own forced equation) and
// the direct G_L, all by one exponential of the block-triangular generator per
// chain structure.
LowFreqResult solve_low(int k_max, double xi_mag, const std::vector<double>& t_grid, BasisPtr basis,
                        double R);
std::vector<LowFreqIterate> iterate_low(int k_max, double xi_mag, const std::vector<double>& t_grid,
                                        BasisPtr basis, double R);
Remainder remainder_low(int k, double xi_mag, const std::vector<double>& t_grid, BasisPtr basis, double R);

struct LadderFit {
    std::vector<double> I_exp, J_exp, V_exp;  // per k
    std::vector<double> I_res, J_res, V_res;
    std::vector<double> xi;
};
// |xi|-exponents of ||I_k||_xi, ||J_k||, ||V_k||_xi at fixed t over xi_grid.
LadderFit fit_low_ladder(int k_max, double t, const std::vector<double>& xi_grid, BasisPtr basis, double R);

}  // namespace vpfp
