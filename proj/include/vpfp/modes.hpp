#pragma once

#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "vpfp/basis.hpp"
#include "vpfp/expm.hpp"

namespace vpfp {

enum class Kind { B, B1, B2, A };
Kind parse_kind(const std::string& s);
const char* kind_name(Kind k);

using SpMatC = Eigen::SparseMatrix<cxd>;

// Dense truncated matrix of B, B1, B2 or A at xi = xi_mag e1.
struct ModeOperator {
    Kind kind = Kind::B;
    double xi_mag = 0.0;
    MatC matrix;
    BasisPtr basis;
    std::vector<int> support;  // invariant subspace (all indices for B and A)
};

ModeOperator assemble(Kind kind, double xi_mag, BasisPtr basis);

struct SemigroupEval {
    ModeOperator op;
    double t = 0.0;
    MatC result;
    double backward_error = 0.0;
};

// e^{t M} for the truncated matrix M; for B1/B2 the result is zero outside the support.
SemigroupEval semigroup(const ModeOperator& op, double t);

// Eigenvalues of the truncated matrix on its support, real part descending.
std::vector<cxd> spectrum(const ModeOperator& op);

// ---- chain-level machinery -------------------------------------------------
// Number of fluid indices (P2) at the head of a chain with the given shift.
inline int chain_fluid_count(int shift) { return shift == 0 ? 2 : (shift == 1 ? 1 : 0); }

// Generator of `kind` on a chain of the given shift, extended to `length`
// entries (length may exceed N - shift + 1 for padded evaluation).
MatC chain_matrix(Kind kind, double xi_mag, int shift, int length);
SpMatC chain_sparse(Kind kind, double xi_mag, int shift, int length);

// Extra chain length needed so that the top N+1 entries of the padded
// exponential agree with the untruncated semigroup.
int semigroup_padding(double xi_mag, double t, int max_pad = 600);

// Block-diagonal operator stored chain by chain (unpadded chain lengths).
struct BlockOp {
    BasisPtr basis;
    std::vector<MatC> blocks;

    static BlockOp zero(BasisPtr b);
    static BlockOp identity(BasisPtr b);
    MatC dense() const;
    VecC apply(const VecC& f) const;
    double norm() const;                  // L2 -> L2
    double norm_xi(double xi_mag) const;  // L2 -> ||.||_xi
    double norm_xi_xi(double xi_mag) const;  // ||.||_xi -> ||.||_xi
    BlockOp& operator+=(const BlockOp& o);
    BlockOp& operator-=(const BlockOp& o);
    BlockOp& operator*=(cxd s);
};
BlockOp operator+(BlockOp a, const BlockOp& b);
BlockOp operator-(BlockOp a, const BlockOp& b);
BlockOp operator*(cxd s, BlockOp a);

// Exact (padded) semigroup e^{tK} restricted to the N-basis, chain by chain.
// pad < 0 selects semigroup_padding(xi, t).
BlockOp semigroup_blocks(Kind kind, double xi_mag, double t, BasisPtr basis, int pad = -1);
// Action of the padded semigroup on one vector (matrix-free).
VecC semigroup_apply(Kind kind, double xi_mag, double t, const BasisSpec& basis, const VecC& f,
                     int pad = -1);

// Lower-triangular level system Y_l' = D_l Y_l + sum_{c: c.to = l} C Y_{c.from},
// Y_l(0) = init_l, with c.from < c.to.
struct LevelCoupling {
    int from = 0, to = 1;
    MatC C;
};
struct LevelSystem {
    std::vector<MatC> diag;
    std::vector<LevelCoupling> coupling;
    std::vector<MatC> init;  // one per level, m_l x p
};
// Solution at each time of t_grid (increasing, >= 0): result[i][l].
std::vector<std::vector<MatC>> solve_levels(const LevelSystem& sys, const std::vector<double>& t_grid,
                                            bool force_matrix_free = false);
// Sparse generator of the whole level system and its 1-norm.
SpMatC level_generator(const LevelSystem& sys, std::vector<int>* offsets = nullptr);
double sparse_norm1(const SpMatC& S);

// ---- spectral gap ---------------------------------------------------------
struct GapScan {
    std::vector<double> xi;
    std::vector<double> max_re;
    double r0_hat = 0.0;    // largest grid |xi| (<= r0_cap) with max Re <= threshold on [xi_min, r0]
    double beta0_hat = 0.0; // -max Re over grid points above r0_hat
    double beta1_hat = 0.0; // min(beta0_hat, 1/2)
    double eta0_hat = 0.0;  // beta1_hat / 2
    double threshold = -0.45;
    double r0_cap = 1.0;
};
GapScan spectral_gap_scan(BasisPtr basis, const std::vector<double>& xi_grid, double threshold = -0.45,
                          double r0_cap = 1.0);

// ---- regularization probe --------------------------------------------------
// sup over |xi| of |xi|^k ||e^{tA(xi)}|| on the untruncated chain (matrix-free).
double scaled_semigroup_norm(int k, double t, double* argmax_xi = nullptr);
// Exact value e^{-2t} sup_xi xi^k e^{-a xi^2}, a = 2D(t)/(1-e^{-2t}); oracle only.
double scaled_semigroup_norm_exact(int k, double t);

struct ProbeFit {
    double exponent = 0.0;  // p in ~ t^{-p}
    double residual = 0.0;
    std::vector<double> t;
    std::vector<double> norm;
};
ProbeFit semigroup_scaling_probe(int k, const std::vector<double>& t_grid);
// Large-t exponential rate of sup_xi |xi|^k ||e^{tA}|| over t_grid.
ProbeFit semigroup_rate_probe(int k, const std::vector<double>& t_grid);

// Coherent-state coefficients e^{-th^2/2} (i th)^n / sqrt(n!) (n < length); rescaled when
// every retained entry would underflow.
VecC coherent_state(double theta, int length);

}  // namespace vpfp
