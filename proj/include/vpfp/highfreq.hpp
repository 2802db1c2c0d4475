#pragma once

#include <vector>

#include "vpfp/lowfreq.hpp"
#include "vpfp/modes.hpp"

namespace vpfp {

struct HighFreqIterate {
    int j = 0;
    double xi_mag = 0.0;
    std::vector<double> t_grid;
    std::vector<BlockOp> I;
    std::vector<VecC> E;  // row functional -(I_j, sqrt M)/|xi|^2
};

struct SingularWaveSum {
    int k_max = 0;
    double xi_mag = 0.0;
    std::vector<double> t_grid;
    std::vector<BlockOp> W;    // sum_{j<=k} I_j
    std::vector<VecC> psi;     // sum_{j<=k} E_j
    std::vector<BlockOp> R;    // G_H - W_k from its own forced equation
    std::vector<VecC> phi;     // -(R_k, sqrt M)/|xi|^2
    std::vector<BlockOp> G_H;  // chi_2 e^{tB}, directly integrated
};

struct HighFreqResult {
    std::vector<HighFreqIterate> iterates;
    SingularWaveSum sum;
};

// Damped iterates I_0 = chi_2 e^{tA}, I_j' = A I_j + (2 + Poisson row) I_{j-1},
// the remainder R_k and G_H, on the padded chains (exact up to the padding
// tolerance). pad < 0 picks the padding from the largest t.
HighFreqResult solve_high(int k_max, double xi_mag, const std::vector<double>& t_grid, BasisPtr basis, double R,
                          int pad = -1);
std::vector<HighFreqIterate> iterate_high(int j_max, double xi_mag, const std::vector<double>& t_grid,
                                          BasisPtr basis, double R);
SingularWaveSum remainder_high(int k, double xi_mag, const std::vector<double>& t_grid, BasisPtr basis,
                               double R);

// Same hierarchy applied to one vector: per time, {I_0 f, ..., I_k f, R_k f, G_H f}.
std::vector<std::vector<VecC>> high_apply(int k_max, double xi_mag, const std::vector<double>& t_grid,
                                          const BasisSpec& basis, const VecC& f, double R);

// W_alpha = chi_2 sum_{j <= 7 + floor(3 alpha/2)} I_j, with each I_j extracted as a
// Taylor coefficient of z -> e^{t(A + zF)} by a discrete contour sum (Q nodes on |z| = 1).
std::vector<BlockOp> singular_wave_W_alpha(int alpha, double xi_mag, const std::vector<double>& t_grid,
                                           BasisPtr basis, double R, int Q = 32);
inline int w_alpha_terms(int alpha) { return 8 + (3 * alpha) / 2; }
// I_j alone by the contour sum (no cutoff).
BlockOp high_iterate_contour(int j, double xi_mag, double t, BasisPtr basis, int Q = 32);

// ||I_j(t, xi)|| on the untruncated s = 0 chain, matrix-free (no cutoff).
double high_iterate_norm(int j, double xi_mag, double t);
// sup over xi >= xi_min of xi^k ||I_j(t, xi)||.
double high_iterate_sup(int j, int k, double t, double xi_min);
// t-exponent q in sup_xi xi^k ||I_j|| ~ t^q over t_grid (q = fitted slope).
ProbeFit high_scaling_probe(int j, int k, const std::vector<double>& t_grid, double xi_min);
// Large-t decay rate of ||I_j(t, xi)|| / t^j at fixed xi.
ProbeFit high_rate_probe(int j, double xi_mag, const std::vector<double>& t_grid);

struct XiFit {
    double exponent = 0.0;
    double residual = 0.0;
    std::vector<double> xi;
    std::vector<double> norm;
};
// Slope of log ||R_k(t, xi)||_xi against log(1+|xi|) over xi_grid.
XiFit fit_high_remainder(int k, double t, const std::vector<double>& xi_grid, BasisPtr basis, double R);

}  // namespace vpfp
