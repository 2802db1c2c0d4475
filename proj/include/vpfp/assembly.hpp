#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vpfp/highfreq.hpp"
#include "vpfp/modes.hpp"
#include "vpfp/spherical.hpp"

namespace vpfp {

struct ModeGrid {
    std::vector<double> nodes;    // increasing |xi|
    std::vector<double> weights;  // trapezoid weights for plain radial sums
    double xi_max = 0.0;
};
// n_low nodes on [xi_min, split], n_high on (split, 20], n_tail on (20, xi_max] when xi_max > 20.
ModeGrid make_mode_grid(double xi_min = 1e-3, double split = 2.0, double xi_max = 60.0, int n_low = 120,
                        int n_high = 200, int n_tail = 60);

// h(r) = (2pi)^{-3/2} 4 pi i^l int k^p c(k) j_l(k r) dk with c sampled on the
// grid and interpolated by cubic splines; the k-integral uses Gauss-Legendre
// panels no wider than a quarter period of j_l.
struct HankelResult {
    std::vector<double> r;
    std::vector<cxd> value;
    bool aliasing_warning = false;  // grid spacing * r > pi/4 somewhere
};
HankelResult hankel_transform(int l, int p, const std::vector<double>& k, const std::vector<cxd>& c,
                              const std::vector<double>& r);
// l = 0, p = 2: g(x) = (2pi)^{-3/2} (4pi/|x|) int k sin(k|x|) g_hat(k) dk.
HankelResult radial_reconstruct(const std::vector<double>& k, const std::vector<cxd>& g_hat,
                                const std::vector<double>& x_mag);

enum class Part { Full, Low, High, HighRemainder };
enum class Data { Isotropic, Microscopic };  // sqrt M or (|v|^2-3) sqrt M / sqrt 6
VecC velocity_data(const BasisSpec& b, Data d);

struct AssemblyConfig {
    int max_degree = 16;
    double R = 0.5;       // cutoff radius of chi_R
    double sigma = 0.1;   // spatial mollifier width
    int k_remainder = 7;  // W_k order for Part::HighRemainder
    ModeGrid grid = make_mode_grid();
};

// Mode response and its (n, l) coefficients per grid node.
struct ModeResponse {
    double t = 0.0;
    std::vector<double> k;
    std::vector<VecC> cart;  // Cartesian Hermite coefficients
    std::vector<VecC> sph;   // axisymmetric (n, l) coefficients
};
ModeResponse mode_response(double t, Part part, Data data, const AssemblyConfig& cfg, BasisPtr basis,
                           const AxisymmetricBasis& ax);

struct Profiles {
    double t = 0.0;
    std::vector<double> r;
    std::vector<double> P0, Pm, P3, full, field;
    // |fine - half-grid| reconstruction difference, a conservative error estimate
    std::vector<double> P0_err, Pm_err, P3_err, full_err, field_err;
    bool aliasing_warning = false;
};
Profiles assemble_green(double t, Part part, Data data, const std::vector<double>& r, const AssemblyConfig& cfg);
Profiles reconstruct_profiles(const ModeResponse& m, const AxisymmetricBasis& ax, const std::vector<double>& r,
                              double sigma);

struct DecayFit {
    std::string component;
    double t = 0.0;
    double exponent_x = 0.0;  // p in |profile| ~ (1+|x|^2)^{-p/2}
    double rate_t = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
    double residual = 0.0;
    bool super_algebraic = false;  // fell below the floor inside the window
    int points = 0;
};
// Least-squares slope of log|profile| against log(1+|x|^2)/2 over the window,
// using the leading points above floor_rel * max|profile| and above the error
// estimate `err` when given.
DecayFit fit_decay(const std::string& component, const std::vector<double>& r, const std::vector<double>& profile,
                   double x_lo, double x_hi, double floor_rel = 1e-9, const std::vector<double>* err = nullptr);
// Exponential rate -d log(value)/dt.
DecayFit fit_rate(const std::string& component, const std::vector<double>& t, const std::vector<double>& value);

std::vector<double> profile_of(const Profiles& p, const std::string& component);
std::vector<double> error_of(const Profiles& p, const std::string& component);
DecayFit fit_profile(const Profiles& p, const std::string& component, double x_lo, double x_hi);

}  // namespace vpfp
