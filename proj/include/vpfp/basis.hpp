#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <json.hpp>

#include "vpfp/types.hpp"

namespace vpfp {

// Coefficient vector of a velocity function in the Hermite basis attached to sqrt(M).
using VelocityVector = VecC;
using SpMat = Eigen::SparseMatrix<double>;

struct MultiIndex {
    int a1 = 0, a2 = 0, a3 = 0;
    int degree() const { return a1 + a2 + a3; }
    int operator[](int k) const { return k == 0 ? a1 : (k == 1 ? a2 : a3); }
};

enum class Proj { P0, Pm, P1, P2, P3 };
Proj parse_proj(const std::string& s);
const char* proj_name(Proj p);

// With xi along e1 every mode operator only moves alpha_1; the basis splits into
// chains with fixed (alpha_2, alpha_3). idx[a1] is the basis index of (a1, a2, a3).
struct Chain {
    int a2 = 0, a3 = 0;
    int shift = 0;  // a2 + a3
    std::vector<int> idx;
    int length() const { return int(idx.size()); }
};

// Tensor Hermite functions psi_a1(v1) psi_a2(v2) psi_a3(v3), |a| <= N, graded
// lexicographic order: by degree, then a1 descending, then a2 descending.
// Index 0 is sqrt(M), indices 1..3 are v_k sqrt(M).
class BasisSpec {
public:
    explicit BasisSpec(int max_degree);

    int max_degree() const { return N_; }
    int dimension() const { return int(table_.size()); }
    const MultiIndex& multi_index(int i) const { return table_.at(i); }
    int index_of(int a1, int a2, int a3) const;  // -1 when outside the truncation

    const std::vector<Chain>& chains() const { return chains_; }
    int chain_of(int i) const { return chain_of_[i]; }

    bool in_projection(int i, Proj p) const;
    std::vector<int> projection_indices(Proj p) const;

    nlohmann::json manifest() const;
    std::string manifest_hash() const;

private:
    int N_;
    std::vector<MultiIndex> table_;
    std::vector<int> lookup_;  // dense (N+1)^3 table
    std::vector<Chain> chains_;
    std::vector<int> chain_of_;
};

using BasisPtr = std::shared_ptr<const BasisSpec>;
BasisPtr build_basis(int max_degree);

inline int basis_dimension(int N) { return (N + 1) * (N + 2) * (N + 3) / 6; }

// Diagonal of L: -|alpha|.
VecR l_diagonal(const BasisSpec& b);
VelocityVector apply_L(const BasisSpec& b, const VelocityVector& f);
VelocityVector project(const BasisSpec& b, const VelocityVector& f, Proj which);

// Multiplication by v_k and d/dv_k from degree <= N into degree <= N+1 (exact, no
// truncation); `ext` must be build_basis(N+1).
SpMat mult_v_ext(const BasisSpec& b, const BasisSpec& ext, int k);
SpMat grad_v_ext(const BasisSpec& b, const BasisSpec& ext, int k);
// Galerkin-truncated versions, square of size dimension().
SpMat mult_v(const BasisSpec& b, int k);
SpMat grad_v(const BasisSpec& b, int k);

// ||f||_sigma^2 = ||grad_v f||^2 + ||<v> f||^2, evaluated without truncation error.
double sigma_norm(const BasisSpec& b, const VelocityVector& f);
// ||grad_v f|| exactly.
double grad_v_norm(const BasisSpec& b, const VelocityVector& f);

// (f, g) + |xi|^{-2} (P0 f, P0 g); conjugate-linear in f.
cxd weighted_inner(const VelocityVector& f, const VelocityVector& g, double xi_mag);
double weighted_norm(const VelocityVector& f, double xi_mag);

// Normalized Hermite functions psi_0..psi_n at x.
void hermite_functions(int n, double x, double* out);
// Value of basis function i at velocity v.
double basis_function(const BasisSpec& b, int i, const std::array<double, 3>& v);

// Coercivity sampling: returns min over random samples of -(Lf,f)/||P1 f||_sigma^2
// and the number of samples for which (Lf,f) <= -||P1 f||^2 failed.
struct CoercivityReport {
    double mu_N = 0.0;
    int violations = 0;
    int samples = 0;
};
CoercivityReport measure_coercivity(const BasisSpec& b, int samples, std::uint64_t seed);

}  // namespace vpfp
