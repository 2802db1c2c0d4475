#include "vpfp/nonlinear.hpp"

#include <cmath>

#include <gsl/gsl_sf_bessel.h>

#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

namespace {

const double kPref = 4.0 * kPi / std::pow(2.0 * kPi, 1.5);

cxd ipow(int l) {
    switch (l % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// Fourier transform of (1+|x|^2)^{-n} in the symmetric convention.
double algebraic_profile_hat(double n, double k) {
    const double nu = n - 1.5;
    const double c = std::pow(2.0, 1.0 - n) / std::tgamma(n);
    if (k < 1e-12) return c * std::pow(2.0, nu - 1.0) * std::tgamma(nu);
    return c * std::pow(k, nu) * gsl_sf_bessel_Knu(nu, k);
}

}  // namespace

RadialGrid make_radial_grid(double radius, double k_max) {
    if (!(radius > 0.0) || !(k_max > 0.0)) throw UsageError("radial grid: radius and k_max must be > 0");
    RadialGrid g;
    g.radius = radius;
    g.k_max = k_max;
    g.dk = kPi / radius;
    g.dr = kPi / k_max;
    const int nk = int(std::floor(k_max / g.dk)) + 1;
    const int nr = int(std::floor(radius / g.dr));
    for (int j = 0; j < nk; ++j) g.k.push_back(j * g.dk);
    for (int i = 1; i <= nr; ++i) g.r.push_back(i * g.dr);
    return g;
}

RadialSolver::RadialSolver(const SimConfig& cfg) : cfg_(cfg) {
    if (cfg.max_degree < 2) throw UsageError("simulate: max_degree must be >= 2");
    if (!(cfg.dt > 0.0) || !(cfg.t_end >= 0.0)) throw UsageError("simulate: need dt > 0 and t_end >= 0");
    if (!(cfg.n_decay > 1.5)) throw UsageError("simulate: n_decay must exceed 3/2");
    grid_ = make_radial_grid(cfg.radius, cfg.k_max);
    basis_ = build_basis(cfg.max_degree);
    ax_ = build_axisymmetric(*basis_);
    const int nk = int(grid_.k.size()), nr = int(grid_.r.size());
    const int lmax = cfg.max_degree;
    J_.assign(lmax + 1, MatR(nk, nr));
    parallel_for(nk, [&](std::size_t j) {
        std::vector<double> jl(lmax + 1);
        for (int i = 0; i < nr; ++i) {
            gsl_sf_bessel_jl_array(lmax, grid_.k[j] * grid_.r[i], jl.data());
            for (int l = 0; l <= lmax; ++l) J_[l](j, i) = jl[l];
        }
    });
    const MatR& T = ax_.T;
    const MatR Lam = T * l_diagonal(*basis_).asDiagonal() * T.transpose();
    const MatR V = T * (MatR(mult_v(*basis_, 0)) * T.transpose());
    const MatR G = T * (MatR(grad_v(*basis_, 0)) * T.transpose());
    raise_ = 0.5 * V - G;
    const VecR t0 = T.col(0), t1 = T.col(1);
    Bk_.resize(nk);
    for (int j = 0; j < nk; ++j) {
        const double k = grid_.k[j];
        MatC B = Lam.cast<cxd>();
        if (k > 0.0) {
            B += cxd(0.0, -k) * V.cast<cxd>();
            B += cxd(0.0, -1.0 / k) * (t1 * t0.transpose()).cast<cxd>();
        }
        Bk_[j] = std::move(B);
    }
}


MatC RadialSolver::propagate(const MatC& c, double h) const {
    const std::vector<MatC>* tab = nullptr;
    std::lock_guard<std::mutex> lock(cache_mutex_);
    for (const auto& e : exp_cache_)
        if (std::abs(e.first - h) <= 1e-14 * std::max(1.0, std::abs(h))) tab = &e.second;
    if (!tab) {
        std::vector<MatC> E(Bk_.size());
        parallel_for(Bk_.size(), [&](std::size_t j) { E[j] = expm_pade13(h * Bk_[j]).value; });
        exp_cache_.emplace_back(h, std::move(E));
        tab = &exp_cache_.back().second;
    }
    MatC out(c.rows(), c.cols());
    for (int j = 0; j < c.rows(); ++j) out.row(j) = ((*tab)[j] * c.row(j).transpose()).transpose();
    return out;
}

PhaseState RadialSolver::zero_state() const {
    PhaseState s;
    s.coeffs = MatC::Zero(grid_.k.size(), nax());
    return s;
}

PhaseState RadialSolver::initial_state() const {
    PhaseState s = zero_state();
    // velocity profile (1+|v|)^{-3} projected on the isotropic functions phi_{n,0}
    std::vector<double> edges;
    for (int i = 0; i <= 40; ++i) edges.push_back(i);
    const QuadRule q = composite_legendre(edges, 16);
    std::vector<double> cv(nax(), 0.0);
    for (int a = 0; a < nax(); ++a) {
        const auto [n, l] = ax_.nl[a];
        if (l != 0) continue;
        if (cfg_.neutral && n == 0) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i) {
            const double rho = q.x[i];
            acc += q.w[i] * rho * rho * std::pow(1.0 + rho, -3.0) * axisymmetric_function(n, 0, {rho, 0.0, 0.0});
        }
        cv[a] = 4.0 * kPi * acc;
    }
    for (std::size_t j = 0; j < grid_.k.size(); ++j) {
        const double sh = cfg_.delta0 * algebraic_profile_hat(cfg_.n_decay, grid_.k[j]);
        for (int a = 0; a < nax(); ++a) s.coeffs(j, a) = sh * cv[a];
    }
    return s;
}

MatR RadialSolver::to_physical(const MatC& c) const {
    const int nk = int(grid_.k.size()), nr = int(grid_.r.size());
    VecR w(nk);
    for (int j = 0; j < nk; ++j) w(j) = grid_.dk * grid_.k[j] * grid_.k[j];
    MatR out(nr, nax());
    for (int a = 0; a < nax(); ++a) {
        const int l = ax_.nl[a].second;
        const VecC x = (kPref * ipow(l)) * (w.cast<cxd>().array() * c.col(a).array()).matrix();
        out.col(a) = J_[l].transpose() * x.real();
        // imaginary part of x only feeds Im f, which vanishes for real states
    }
    return out;
}

MatC RadialSolver::to_fourier(const MatR& phys) const {
    const int nr = int(grid_.r.size());
    VecR w(nr);
    for (int i = 0; i < nr; ++i) w(i) = grid_.dr * grid_.r[i] * grid_.r[i];
    MatC out(grid_.k.size(), nax());
    for (int a = 0; a < nax(); ++a) {
        const int l = ax_.nl[a].second;
        const VecR y = J_[l] * (w.array() * phys.col(a).array()).matrix();
        out.col(a) = (kPref * std::conj(ipow(l))) * y.cast<cxd>();
    }
    return out;
}

VecR RadialSolver::poisson_field(const PhaseState& s) const {
    const int nk = int(grid_.k.size());
    VecR w(nk);
    for (int j = 0; j < nk; ++j) w(j) = grid_.dk * grid_.k[j] * s.coeffs(j, 0).real();
    return kPref * (J_[1].transpose() * w);
}

MatC RadialSolver::nonlinear_term(const MatC& c) const {
    PhaseState s;
    s.coeffs = c;
    const VecR E = poisson_field(s);
    const MatR f = to_physical(c);
    MatR H = E.asDiagonal() * (f * raise_.transpose());
    return to_fourier(H);
}

double RadialSolver::mass(const PhaseState& s) const { return std::pow(2.0 * kPi, 1.5) * s.coeffs(0, 0).real(); }

double RadialSolver::energy(const PhaseState& s) const {
    double e = 0.0;
    for (std::size_t j = 0; j < grid_.k.size(); ++j) {
        const double k = grid_.k[j];
        const double w = (j == 0 ? 0.5 : 1.0) * grid_.dk * 4.0 * kPi;
        e += w * (k * k * s.coeffs.row(j).squaredNorm() + std::norm(s.coeffs(j, 0)));
    }
    return e;
}

double RadialSolver::gradv_ratio(const PhaseState& s) const {
    const MatC Tt = ax_.T.transpose().cast<cxd>();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 1; j < grid_.k.size(); ++j) {
        const double w = grid_.k[j] * grid_.k[j];
        const VecC u = s.coeffs.row(j).transpose();
        const double g = grad_v_norm(*basis_, Tt * u);
        num += w * g * g;
        den += w * u.squaredNorm();
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double RadialSolver::cfl_limit(const PhaseState& s, double* r_at) const {
    const VecR E = poisson_field(s);
    Eigen::Index imax = 0;
    const double emax = E.cwiseAbs().maxCoeff(&imax);
    if (r_at) *r_at = grid_.r[imax];
    const double rn = Eigen::JacobiSVD<MatR>(raise_).singularValues()(0);
    return emax > 0.0 ? 1.0 / (emax * rn) : INFINITY;
}

PhaseState RadialSolver::step(const PhaseState& s, double h) const {
    PhaseState o;
    o.t = s.t + h;
    if (cfg_.linear_only) {
        o.coeffs = propagate(s.coeffs, h);
        return o;
    }
    const MatC& u = s.coeffs;
    const MatC K1 = nonlinear_term(u);
    const MatC U2 = propagate(u + 0.5 * h * K1, 0.5 * h);
    const MatC K2 = nonlinear_term(U2);
    const MatC EK2 = propagate(K2, 0.5 * h);
    const MatC U3 = propagate(u - h * K1, h) + 2.0 * h * EK2;
    const MatC K3 = nonlinear_term(U3);
    o.coeffs = propagate(u + (h / 6.0) * K1, h) + (4.0 * h / 6.0) * EK2 + (h / 6.0) * K3;
    return o;
}

Trajectory evolve(const RadialSolver& solver, const PhaseState& initial, double t_end, double dt,
                  double snapshot_every) {
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw UsageError("evolve: need dt > 0, t_end >= 0");
    Trajectory tr;
    const int steps = int(std::llround(t_end / dt));
    const int every = std::max(1, int(std::llround(snapshot_every / dt)));
    PhaseState s = initial;
    auto check_cfl = [&](const PhaseState& st) {
        if (solver.config().linear_only) return;
        double r_at = 0.0;
        const double lim = solver.cfl_limit(st, &r_at);
        if (dt > lim)
            throw NumericalError("CFL violation: dt = " + std::to_string(dt) + " exceeds " + std::to_string(lim) +
                                 " (limiting mode r = " + std::to_string(r_at) + ")");
    };
    const double m0 = solver.mass(initial);
    auto record = [&](const PhaseState& st) {
        tr.snapshots.push_back(st);
        tr.mass.push_back(solver.mass(st));
        tr.energy.push_back(solver.energy(st));
        if (st.t > 0.0)
            tr.max_mass_drift_rate = std::max(tr.max_mass_drift_rate, std::abs(tr.mass.back() - m0) / st.t);
    };
    check_cfl(s);
    record(s);
    for (int n = 1; n <= steps; ++n) {
        s = solver.step(s, dt);
        s.t = n * dt;
        if (n % every == 0 || n == steps) {
            check_cfl(s);
            record(s);
        }
    }
    return tr;
}

SpaceProfiles space_profiles(const RadialSolver& solver, const PhaseState& s) {
    const AxisymmetricBasis& ax = solver.axis();
    SpaceProfiles p;
    p.t = s.t;
    p.r = solver.grid().r;
    const MatR f = solver.to_physical(s.coeffs);
    const VecR E = solver.poisson_field(s);
    const int i00 = ax.index(0, 0), i01 = ax.index(0, 1);
    const MatC Tt = ax.T.transpose().cast<cxd>();
    const std::size_t nr = p.r.size();
    p.P0.resize(nr);
    p.Pm.resize(nr);
    p.P3.resize(nr);
    p.field.resize(nr);
    p.gradv.resize(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        double s3 = 0.0;
        for (int a = 0; a < ax.size(); ++a)
            if (2 * ax.nl[a].first + ax.nl[a].second >= 2) s3 += f(i, a) * f(i, a);
        p.P0[i] = std::abs(f(i, i00));
        p.Pm[i] = std::abs(f(i, i01));
        p.P3[i] = std::sqrt(s3);
        p.field[i] = std::abs(E(i));
        const VecC u = f.row(i).transpose().cast<cxd>();
        p.gradv[i] = grad_v_norm(*solver.basis(), Tt * u);
    }
    return p;
}

std::vector<double> channel_targets(bool neutral) {
    // |x|-exponents for P0, Pm + field, P3, h(t) grad_v
    return neutral ? std::vector<double>{5.0, 3.0, 4.0, 3.0} : std::vector<double>{4.0, 2.0, 3.0, 2.0};
}

std::vector<double> weighted_channels(const SpaceProfiles& p, bool neutral, double r_hi) {
    const auto w = channel_targets(neutral);
    const double h = std::sqrt(p.t) / (1.0 + std::sqrt(p.t));
    std::vector<double> q(4, 0.0);
    for (std::size_t i = 0; i < p.r.size(); ++i) {
        if (p.r[i] > r_hi) break;
        const double s = 1.0 + p.r[i] * p.r[i];
        const double vals[4] = {p.P0[i], p.Pm[i] + p.field[i], p.P3[i], h * p.gradv[i]};
        for (int c = 0; c < 4; ++c) q[c] = std::max(q[c], std::pow(s, 0.5 * w[c]) * vals[c]);
    }
    return q;
}

namespace {

double weighted_sup(const RadialSolver& solver, const MatC& c, double n_decay, double r_hi) {
    const MatR f = solver.to_physical(c);
    const auto& r = solver.grid().r;
    double q = 0.0;
    for (std::size_t i = 0; i < r.size() && r[i] <= r_hi; ++i)
        q = std::max(q, std::pow(1.0 + r[i] * r[i], n_decay) * f.row(i).norm());
    return q;
}

}  // namespace

IterationTrace picard_solve(const RadialSolver& solver, const PhaseState& initial, int n_max) {
    if (n_max < 1) throw UsageError("picard_solve: n_max must be >= 1");
    const SimConfig& cfg = solver.config();
    const double tau = 0.5 * cfg.picard_dt;
    const int M = int(std::llround(cfg.picard_t_end / tau));
    const double r_hi = 0.5 * cfg.radius;
    std::vector<MatC> lin(M + 1);
    lin[0] = initial.coeffs;
    for (int i = 1; i <= M; ++i) lin[i] = solver.propagate(lin[i - 1], tau);
    std::vector<MatC> prev(M + 1, MatC::Zero(initial.coeffs.rows(), initial.coeffs.cols()));
    IterationTrace tr;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<MatC> cur(M + 1);
        if (n == 1 || cfg.linear_only) {
            cur = lin;
        } else {
            std::vector<MatC> N(M + 1);
            parallel_for(M + 1, [&](std::size_t i) { N[i] = solver.nonlinear_term(prev[i]); });
            std::vector<MatC> D(M + 1);
            D[0] = MatC::Zero(lin[0].rows(), lin[0].cols());
            if (M >= 1) D[1] = solver.propagate(D[0] + 0.5 * tau * N[0], tau) + 0.5 * tau * N[1];
            for (int i = 2; i <= M; ++i)
                D[i] = solver.propagate(D[i - 2] + (tau / 3.0) * N[i - 2], 2.0 * tau) +
                       (4.0 * tau / 3.0) * solver.propagate(N[i - 1], tau) + (tau / 3.0) * N[i];
            for (int i = 0; i <= M; ++i) cur[i] = lin[i] + D[i];
        }
        double qn = 0.0, dn = 0.0;
        for (int i = 0; i <= M; ++i) {
            qn = std::max(qn, weighted_sup(solver, cur[i], cfg.n_decay, r_hi));
            dn = std::max(dn, weighted_sup(solver, cur[i] - prev[i], cfg.n_decay, r_hi));
        }
        tr.n.push_back(n);
        tr.sup_weighted_norms.push_back(qn);
        tr.distances.push_back(dn);
        prev = std::move(cur);
        // f^1 - f^0 is the linear solution itself, so geometric ratios start at n = 3;
        // distances at roundoff level carry no ratio information
        const bool resolved = dn > 1e-15 * qn;
        if (n == 2) tr.contraction_ratio = dn / tr.distances[0];
        if (n >= 3 && resolved) {
            const double ratio = dn / tr.distances[n - 2];
            if (n >= 4 && std::abs(ratio - tr.contraction_ratio) <= 0.1 * ratio) tr.converged = true;
            tr.contraction_ratio = ratio;
        }
        if (n >= 2 && !resolved) tr.converged = true;
        if (tr.converged) break;
    }
    return tr;
}

DecayReport decay_report(const RadialSolver& solver, const Trajectory& traj) {
    const SimConfig& cfg = solver.config();
    DecayReport rep;
    rep.mass_drift_rate = traj.max_mass_drift_rate;
    if (traj.snapshots.empty()) return rep;
    std::size_t at = 0;
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i)
        if (std::abs(traj.snapshots[i].t - cfg.fit_t) < std::abs(traj.snapshots[at].t - cfg.fit_t)) at = i;
    const PhaseState& snap = traj.snapshots[at];
    const SpaceProfiles p = space_profiles(solver, snap);
    std::vector<double> pmf(p.r.size());
    for (std::size_t i = 0; i < p.r.size(); ++i) pmf[i] = p.Pm[i] + p.field[i];
    auto add = [&](const std::string& name, const std::vector<double>& prof) {
        DecayFit f = fit_decay(name, p.r, prof, cfg.fit_x_lo, cfg.fit_x_hi);
        f.t = snap.t;
        rep.fits.push_back(f);
    };
    add("P0", p.P0);
    add("Pm+field", pmf);
    add("P3", p.P3);
    add("field", p.field);
    // exponential rates of the weighted channels
    std::vector<double> ts;
    std::vector<std::vector<double>> q(4);
    for (const auto& s : traj.snapshots) {
        if (s.t < cfg.rate_t_lo) continue;
        const auto w = weighted_channels(space_profiles(solver, s), cfg.neutral, cfg.fit_x_hi);
        ts.push_back(s.t);
        for (int c = 0; c < 4; ++c) q[c].push_back(w[c]);
    }
    const char* names[4] = {"Q_P0", "Q_Pm+field", "Q_P3", "Q_gradv"};
    rep.weighted_rate = INFINITY;
    if (ts.size() >= 2) {
        for (int c = 0; c < 4; ++c) {
            DecayFit f = fit_rate(names[c], ts, q[c]);
            rep.weighted_rate = std::min(rep.weighted_rate, f.rate_t);
            rep.fits.push_back(f);
        }
    } else {
        rep.weighted_rate = NAN;
    }
    // early-time grad_v channel
    const std::vector<double> te = logspace(1e-3, 1e-1, 9);
    std::vector<double> lt, lr;
    PhaseState s = traj.snapshots.front();
    for (double t : te) {
        const int sub = std::max(4, int(std::ceil((t - s.t) / std::min(cfg.dt, 0.05 * t))));
        const double h = (t - s.t) / sub;
        for (int i = 0; i < sub; ++i) s = solver.step(s, h);
        s.t = t;
        lt.push_back(std::log(t));
        lr.push_back(std::log(solver.gradv_ratio(s)));
    }
    rep.gradv_slope = fit_line(lt, lr).slope;
    DecayFit g;
    g.component = "gradv_ratio_slope";
    g.rate_t = rep.gradv_slope;
    g.points = int(te.size());
    rep.fits.push_back(g);
    return rep;
}

}  // namespace vpfp
