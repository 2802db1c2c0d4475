#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <vector>

#include "vpfp/assembly.hpp"
#include "vpfp/spherical.hpp"

namespace vpfp {

// Spherically symmetric configurations on R^3: f(x, v) is axisymmetric about
// x/|x|, so its Fourier transform is axisymmetric about xi/|xi| and is stored as
// (n, l) coefficients on a uniform |xi| grid k_j = j dk, dk = pi / radius.
struct RadialGrid {
    double radius = 100.0;
    double k_max = 30.0;
    double dk = 0.0, dr = 0.0;
    std::vector<double> k;  // k_0 = 0
    std::vector<double> r;  // r_i = i dr, i >= 1
};
RadialGrid make_radial_grid(double radius, double k_max);

struct PhaseState {
    double t = 0.0;
    MatC coeffs;  // rows: k nodes, columns: (n, l) index
};

struct SimConfig {
    int max_degree = 8;
    double radius = 100.0;
    double k_max = 30.0;
    double delta0 = 1e-3;
    double n_decay = 2.0;     // spatial profile (1 + |x|^2)^{-n}
    bool neutral = false;     // remove the density component of the velocity profile
    bool linear_only = false;
    double dt = 0.05;
    double t_end = 10.0;
    double snapshot_every = 0.5;
    double fit_x_lo = 5.0, fit_x_hi = 30.0;
    double fit_t = 2.0;  // spatial fits use the snapshot nearest this time
    double rate_t_lo = 5.0;
    int picard_max = 4;
    double picard_dt = 0.1;
    double picard_t_end = 4.0;
    std::uint64_t seed = 1;
};

class RadialSolver {
public:
    explicit RadialSolver(const SimConfig& cfg);

    const SimConfig& config() const { return cfg_; }
    const RadialGrid& grid() const { return grid_; }
    const AxisymmetricBasis& axis() const { return ax_; }
    BasisPtr basis() const { return basis_; }
    int nax() const { return ax_.size(); }

    PhaseState initial_state() const;
    PhaseState zero_state() const;

    // Physical (n, l) coefficients f_{nl}(r_i) (rows r, columns index); real for real f.
    MatR to_physical(const MatC& coeffs) const;
    MatC to_fourier(const MatR& phys) const;

    // d Phi/dr on the r grid, Delta Phi = rho.
    VecR poisson_field(const PhaseState& s) const;
    // H(f) = Phi'(r) (v1/2 - d/dv1) f in the frame x/|x| = e1, returned in Fourier form.
    MatC nonlinear_term(const MatC& coeffs) const;
    // e^{h B(k)} applied row by row.
    MatC propagate(const MatC& coeffs, double h) const;

    double mass(const PhaseState& s) const;  // int int f sqrt(M) dx dv
    double energy(const PhaseState& s) const;  // ||f||^2 + ||grad Phi||^2
    double gradv_ratio(const PhaseState& s) const;  // ||grad_v f|| / ||f|| over (x, v)

    // Lawson RK3 step of size h.
    PhaseState step(const PhaseState& s, double h) const;
    // Largest stable dt for the explicit part and the r where it is attained.
    double cfl_limit(const PhaseState& s, double* r_at = nullptr) const;

private:
    SimConfig cfg_;
    RadialGrid grid_;
    BasisPtr basis_;
    AxisymmetricBasis ax_;
    std::vector<MatR> J_;       // J_[l](k, r) = j_l(k r)
    std::vector<MatC> Bk_;      // B(k) in the (n, l) basis
    MatR raise_;                // (v1/2 - d/dv1) in the (n, l) basis
    mutable std::deque<std::pair<double, std::vector<MatC>>> exp_cache_;
    mutable std::mutex cache_mutex_;
};

struct Trajectory {
    std::vector<PhaseState> snapshots;
    std::vector<double> mass;
    std::vector<double> energy;
    double max_mass_drift_rate = 0.0;  // max |mass - mass0| / t
};
Trajectory evolve(const RadialSolver& solver, const PhaseState& initial, double t_end, double dt,
                  double snapshot_every);

struct SpaceProfiles {
    double t = 0.0;
    std::vector<double> r, P0, Pm, P3, field, gradv;
};
SpaceProfiles space_profiles(const RadialSolver& solver, const PhaseState& s);

struct IterationTrace {
    std::vector<int> n;
    std::vector<double> sup_weighted_norms;  // sup_t Q(f^n)
    std::vector<double> distances;           // sup_t Q(f^n - f^{n-1})
    double contraction_ratio = 0.0;  // last resolved d_n / d_{n-1}, n >= 3
    bool converged = false;          // ratio settled or distance at roundoff
};
// Picard iterates f^n = G f0 + int G(t-s) H(f^{n-1})(s) ds on a uniform grid of
// step dt/2, Duhamel integrals by interleaved Simpson sums.
IterationTrace picard_solve(const RadialSolver& solver, const PhaseState& initial, int n_max);

struct DecayReport {
    std::vector<DecayFit> fits;
    double weighted_rate = 0.0;  // min over channels
    double gradv_slope = 0.0;
    double mass_drift_rate = 0.0;
};
DecayReport decay_report(const RadialSolver& solver, const Trajectory& traj);

// Weighted channel norms Q_c(t) = sup_r (1+r^2)^{w_c/2} profile_c(r) for c in
// {P0, Pm+field, P3, gradv}; w from the charged or neutral targets.
std::vector<double> channel_targets(bool neutral);
std::vector<double> weighted_channels(const SpaceProfiles& p, bool neutral, double r_hi);

}  // namespace vpfp
