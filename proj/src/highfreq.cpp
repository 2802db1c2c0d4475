#include "vpfp/highfreq.hpp"

#include <cmath>

#include "vpfp/kernel.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

namespace {

// sum_{j > k} x^j / j!
double exp_tail(int k, double x) {
    double term = 1.0, sum = 0.0;
    for (int j = 1; j <= k; ++j) term *= x / j;
    for (int j = k + 1; j < 2000; ++j) {
        term *= x / j;
        sum += term;
        if (term < 1e-17 * sum && j > x) break;
    }
    return k < 0 ? std::exp(x) : sum;
}

double taylor_term(int j, double x) {
    double v = 1.0;
    for (int i = 1; i <= j; ++i) v *= x / i;
    return v;
}

MatC poisson_forcing(double xi, int len) {
    MatC F = 2.0 * MatC::Identity(len, len);
    if (len > 1) F(1, 0) += cxd(0.0, -1.0 / xi);
    return F;
}

int max_padding(double xi, const std::vector<double>& t_grid) {
    int p = 0;
    for (double t : t_grid) p = std::max(p, semigroup_padding(xi, t));
    return p;
}

// Levels I_0..I_K, R_K, G_H on the padded s = 0 chain for input columns X (m x p).
std::vector<std::vector<MatC>> chain0_levels(int K, double xi, int m, int pad, const std::vector<double>& t_grid,
                                             const MatC& X) {
    const int len = m + pad;
    const MatC A0 = chain_matrix(Kind::A, xi, 0, len);
    const MatC B0 = chain_matrix(Kind::B, xi, 0, len);
    const MatC F0 = poisson_forcing(xi, len);
    LevelSystem sys;
    const int p = int(X.cols());
    MatC Xp = MatC::Zero(len, p);
    Xp.topRows(m) = X;
    for (int j = 0; j <= K; ++j) sys.diag.push_back(A0);
    sys.diag.push_back(B0);
    sys.diag.push_back(B0);
    sys.init.assign(sys.diag.size(), MatC::Zero(len, p));
    sys.init[0] = Xp;
    sys.init[K + 2] = Xp;
    for (int j = 1; j <= K; ++j) sys.coupling.push_back({j - 1, j, F0});
    sys.coupling.push_back({K, K + 1, F0});
    auto sol = solve_levels(sys, t_grid);
    for (auto& lv : sol)
        for (auto& M : lv) M = MatC(M.topRows(m));
    return sol;
}

int chain0_index(const BasisSpec& b) {
    const auto& ch = b.chains();
    for (std::size_t c = 0; c < ch.size(); ++c)
        if (ch[c].shift == 0) return int(c);
    throw NumericalError("basis has no s = 0 chain");
}

VecC density_row(const BlockOp& op, int c0, double xi) {
    const BasisSpec& b = *op.basis;
    VecC row = VecC::Zero(b.dimension());
    const Chain& ch = b.chains()[c0];
    for (int a = 0; a < ch.length(); ++a) row(ch.idx[a]) = -op.blocks[c0](0, a) / (xi * xi);
    return row;
}

}  // namespace

HighFreqResult solve_high(int K, double xi, const std::vector<double>& t_grid, BasisPtr basis, double R,
                          int pad) {
    if (K < 0) throw UsageError("solve_high: k_max must be >= 0");
    if (!(xi > 0.0)) throw UsageError("solve_high: xi_mag must be > 0");
    const double chi = cutoff_chi(xi, R, Cutoff::High);
    const std::size_t nt = t_grid.size();
    const BasisSpec& b = *basis;
    HighFreqResult res;
    for (int j = 0; j <= K; ++j) {
        HighFreqIterate it;
        it.j = j;
        it.xi_mag = xi;
        it.t_grid = t_grid;
        it.I.assign(nt, BlockOp::zero(basis));
        res.iterates.push_back(std::move(it));
    }
    SingularWaveSum& S = res.sum;
    S.k_max = K;
    S.xi_mag = xi;
    S.t_grid = t_grid;
    S.W.assign(nt, BlockOp::zero(basis));
    S.R.assign(nt, BlockOp::zero(basis));
    S.G_H.assign(nt, BlockOp::zero(basis));
    const int c0 = chain0_index(b);
    if (chi != 0.0) {
        if (pad < 0) pad = max_padding(xi, t_grid);
        const int m = b.chains()[c0].length();
        auto lv = chain0_levels(K, xi, m, pad, t_grid, MatC::Identity(m, m));
        for (std::size_t i = 0; i < nt; ++i) {
            const double t = t_grid[i];
            for (int j = 0; j <= K; ++j) res.iterates[j].I[i].blocks[c0] = chi * lv[i][j];
            S.R[i].blocks[c0] = chi * lv[i][K + 1];
            S.G_H[i].blocks[c0] = chi * lv[i][K + 2];
            BlockOp E = semigroup_blocks(Kind::A, xi, t, basis, pad);
            for (std::size_t c = 0; c < b.chains().size(); ++c) {
                if (int(c) == c0) continue;
                for (int j = 0; j <= K; ++j) res.iterates[j].I[i].blocks[c] = chi * taylor_term(j, 2 * t) * E.blocks[c];
                S.R[i].blocks[c] = chi * exp_tail(K, 2 * t) * E.blocks[c];
                S.G_H[i].blocks[c] = chi * std::exp(2 * t) * E.blocks[c];
            }
        }
    }
    for (auto& it : res.iterates)
        for (std::size_t i = 0; i < nt; ++i) it.E.push_back(density_row(it.I[i], c0, xi));
    for (std::size_t i = 0; i < nt; ++i) {
        VecC psi = VecC::Zero(b.dimension());
        for (int j = 0; j <= K; ++j) {
            S.W[i] += res.iterates[j].I[i];
            psi += res.iterates[j].E[i];
        }
        S.psi.push_back(psi);
        S.phi.push_back(density_row(S.R[i], c0, xi));
    }
    return res;
}

std::vector<HighFreqIterate> iterate_high(int j_max, double xi, const std::vector<double>& t_grid, BasisPtr basis,
                                          double R) {
    return solve_high(j_max, xi, t_grid, basis, R).iterates;
}

SingularWaveSum remainder_high(int k, double xi, const std::vector<double>& t_grid, BasisPtr basis, double R) {
    return solve_high(k, xi, t_grid, basis, R).sum;
}

std::vector<std::vector<VecC>> high_apply(int K, double xi, const std::vector<double>& t_grid,
                                          const BasisSpec& b, const VecC& f, double R) {
    if (f.size() != b.dimension()) throw UsageError("high_apply: size mismatch");
    const double chi = cutoff_chi(xi, R, Cutoff::High);
    const std::size_t nt = t_grid.size();
    std::vector<std::vector<VecC>> out(nt, std::vector<VecC>(K + 3, VecC::Zero(b.dimension())));
    if (chi == 0.0) return out;
    const int c0 = chain0_index(b);
    const Chain& ch0 = b.chains()[c0];
    const int m = ch0.length();
    MatC X(m, 1);
    VecC rest = f;
    for (int a = 0; a < m; ++a) {
        X(a, 0) = f(ch0.idx[a]);
        rest(ch0.idx[a]) = 0.0;
    }
    std::vector<std::vector<MatC>> lv;
    if (X.norm() > 0.0) lv = chain0_levels(K, xi, m, max_padding(xi, t_grid), t_grid, X);
    const bool has_rest = rest.norm() > 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = t_grid[i];
        VecC e = has_rest ? semigroup_apply(Kind::A, xi, t, b, rest) : VecC::Zero(b.dimension());
        for (int l = 0; l < K + 3; ++l) {
            double s = l <= K ? taylor_term(l, 2 * t) : (l == K + 1 ? exp_tail(K, 2 * t) : std::exp(2 * t));
            VecC v = s * e;
            if (!lv.empty())
                for (int a = 0; a < m; ++a) v(ch0.idx[a]) = lv[i][l](a, 0);
            out[i][l] = chi * v;
        }
    }
    return out;
}

BlockOp high_iterate_contour(int j, double xi, double t, BasisPtr basis, int Q) {
    if (j < 0 || Q <= j) throw UsageError("high_iterate_contour: need 0 <= j < Q");
    const BasisSpec& b = *basis;
    const int c0 = chain0_index(b);
    const int m = b.chains()[c0].length();
    const int pad = semigroup_padding(xi, t);
    const int len = m + pad;
    const MatC A0 = chain_matrix(Kind::A, xi, 0, len);
    const MatC F0 = poisson_forcing(xi, len);
    MatC acc = MatC::Zero(len, len);
    cxd scal = 0.0;
    for (int q = 0; q < Q; ++q) {
        const cxd z = std::polar(1.0, 2.0 * kPi * q / Q);
        const cxd w = std::polar(1.0, -2.0 * kPi * double(q) * j / Q);
        acc += w * expm_pade13(t * (A0 + z * F0)).value;
        scal += w * std::exp(2.0 * t * z);
    }
    acc /= double(Q);
    scal /= double(Q);
    BlockOp E = semigroup_blocks(Kind::A, xi, t, basis, pad);
    BlockOp out = BlockOp::zero(basis);
    for (std::size_t c = 0; c < b.chains().size(); ++c)
        out.blocks[c] = int(c) == c0 ? MatC(acc.topLeftCorner(m, m)) : MatC(scal * E.blocks[c]);
    return out;
}

std::vector<BlockOp> singular_wave_W_alpha(int alpha, double xi, const std::vector<double>& t_grid, BasisPtr basis,
                                           double R, int Q) {
    if (alpha < 0) throw UsageError("singular_wave_W_alpha: alpha must be >= 0");
    const int terms = w_alpha_terms(alpha);
    const double chi = cutoff_chi(xi, R, Cutoff::High);
    std::vector<BlockOp> out;
    for (double t : t_grid) {
        BlockOp W = BlockOp::zero(basis);
        if (chi != 0.0)
            for (int j = 0; j < terms; ++j) W += high_iterate_contour(j, xi, t, basis, Q);
        W *= chi;
        out.push_back(std::move(W));
    }
    return out;
}

double high_iterate_norm(int j, double xi, double t) {
    if (j < 0 || !(t > 0.0) || !(xi > 0.0)) throw UsageError("high_iterate_norm: need j >= 0, t > 0, xi > 0");
    const int len = 8 + semigroup_padding(xi, t, 4000);
    const SpMatC A0 = chain_sparse(Kind::A, xi, 0, len);
    std::vector<Eigen::Triplet<cxd>> trip;
    for (int l = 0; l <= j; ++l) {
        const int o = l * len;
        for (int k = 0; k < A0.outerSize(); ++k)
            for (SpMatC::InnerIterator it(A0, k); it; ++it) trip.emplace_back(o + it.row(), o + it.col(), it.value());
        if (l > 0) {
            for (int a = 0; a < len; ++a) trip.emplace_back(o + a, o - len + a, 2.0);
            trip.emplace_back(o + 1, o - len, cxd(0.0, -1.0 / xi));
        }
    }
    const int S = (j + 1) * len;
    SpMatC G(S, S);
    G.setFromTriplets(trip.begin(), trip.end());
    const SpMatC Gh = SpMatC(G.adjoint());
    const double n1 = std::max(sparse_norm1(G), sparse_norm1(Gh));
    auto fwd = [&](const MatC& X) {
        MatC Y = MatC::Zero(S, X.cols());
        Y.topRows(len) = X;
        Y = expmv([&](const MatC& Z) { return MatC(G * Z); }, n1, t, Y);
        return MatC(Y.bottomRows(len));
    };
    auto adj = [&](const MatC& X) {
        MatC Y = MatC::Zero(S, X.cols());
        Y.bottomRows(len) = X;
        Y = expmv([&](const MatC& Z) { return MatC(Gh * Z); }, n1, t, Y);
        return MatC(Y.topRows(len));
    };
    return power_norm(fwd, adj, coherent_state(std::tanh(0.5 * t) * xi, len), 40, 1e-9);
}

double high_iterate_sup(int j, int k, double t, double xi_min) {
    if (!(xi_min > 0.0)) throw UsageError("high_iterate_sup: xi_min must be > 0");
    const double rho = std::exp(-t);
    const double a = 2.0 * variance_D(t) / (1.0 - rho * rho);
    const double guess = std::max(xi_min, k > 0 ? std::sqrt(k / (2.0 * a)) : xi_min);
    const double lmin = std::log(xi_min);
    auto val = [&](double lx) {
        lx = std::max(lx, lmin);
        const double xi = std::exp(lx);
        return k * lx + std::log(high_iterate_norm(j, xi, t));
    };
    double best_lx = lmin, best = val(lmin);
    for (int i = -2; i <= 2; ++i) {
        const double lx = std::log(guess) + 0.25 * i;
        if (lx <= lmin) continue;
        const double v = val(lx);
        if (v > best) {
            best = v;
            best_lx = lx;
        }
    }
    // golden refinement on [best - 0.25, best + 0.25] clipped to xi >= xi_min
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::max(lmin, best_lx - 0.25), hi = best_lx + 0.25;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = val(x1), f2 = val(x2);
    for (int it = 0; it < 10; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = val(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = val(x1);
        }
    }
    return std::exp(std::max({best, f1, f2}));
}

ProbeFit high_scaling_probe(int j, int k, const std::vector<double>& t_grid, double xi_min) {
    ProbeFit p;
    p.t = t_grid;
    p.norm.assign(t_grid.size(), 0.0);
    parallel_for(t_grid.size(), [&](std::size_t i) { p.norm[i] = high_iterate_sup(j, k, t_grid[i], xi_min); });
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        lx.push_back(std::log(t_grid[i]));
        ly.push_back(std::log(p.norm[i]));
    }
    LineFit f = fit_line(lx, ly);
    p.exponent = f.slope;
    p.residual = f.residual;
    return p;
}

ProbeFit high_rate_probe(int j, double xi, const std::vector<double>& t_grid) {
    ProbeFit p;
    p.t = t_grid;
    p.norm.assign(t_grid.size(), 0.0);
    parallel_for(t_grid.size(), [&](std::size_t i) { p.norm[i] = high_iterate_norm(j, xi, t_grid[i]); });
    std::vector<double> ly;
    for (std::size_t i = 0; i < t_grid.size(); ++i) ly.push_back(std::log(p.norm[i]) - j * std::log(t_grid[i]));
    LineFit f = fit_line(t_grid, ly);
    p.exponent = -f.slope;
    p.residual = f.residual;
    return p;
}

XiFit fit_high_remainder(int k, double t, const std::vector<double>& xi_grid, BasisPtr basis, double R) {
    XiFit f;
    f.xi = xi_grid;
    f.norm.assign(xi_grid.size(), 0.0);
    parallel_for(xi_grid.size(), [&](std::size_t i) {
        f.norm[i] = solve_high(k, xi_grid[i], {t}, basis, R).sum.R[0].norm_xi(xi_grid[i]);
    });
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xi_grid.size(); ++i) {
        lx.push_back(std::log1p(xi_grid[i]));
        ly.push_back(std::log(f.norm[i]));
    }
    LineFit lf = fit_line(lx, ly);
    f.exponent = lf.slope;
    f.residual = lf.residual;
    return f;
}

}  // namespace vpfp
