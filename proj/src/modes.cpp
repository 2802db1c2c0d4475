#include "vpfp/modes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "vpfp/kernel.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

Kind parse_kind(const std::string& s) {
    if (s == "B") return Kind::B;
    if (s == "B1") return Kind::B1;
    if (s == "B2") return Kind::B2;
    if (s == "A") return Kind::A;
    throw UsageError("unknown operator kind '" + s + "'");
}

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::B: return "B";
        case Kind::B1: return "B1";
        case Kind::B2: return "B2";
        case Kind::A: return "A";
    }
    return "?";
}

static void check_xi(Kind kind, double xi) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw UsageError("xi_mag must be finite and >= 0");
    if ((kind == Kind::B || kind == Kind::B1) && xi == 0.0)
        throw UsageError(std::string("singular mode: kind ") + kind_name(kind) + " needs xi_mag > 0");
}

ModeOperator assemble(Kind kind, double xi_mag, BasisPtr basis) {
    check_xi(kind, xi_mag);
    const BasisSpec& b = *basis;
    const int d = b.dimension();
    ModeOperator op;
    op.kind = kind;
    op.xi_mag = xi_mag;
    op.basis = basis;
    MatC M = MatC::Zero(d, d);
    const VecR L = l_diagonal(b);
    const MatR V1 = MatR(mult_v(b, 0));
    M.diagonal() = L.cast<cxd>();
    M += cxd(0.0, -xi_mag) * V1.cast<cxd>();
    if (kind == Kind::A) M.diagonal().array() -= 2.0;
    if (kind == Kind::B || kind == Kind::B1) M(1, 0) += cxd(0.0, -1.0 / xi_mag);
    auto keep = [&](Proj p) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (!b.in_projection(i, p) || !b.in_projection(j, p)) M(i, j) = 0.0;
        op.support = b.projection_indices(p);
    };
    if (kind == Kind::B1) keep(Proj::P2);
    else if (kind == Kind::B2) keep(Proj::P3);
    else {
        op.support.resize(d);
        for (int i = 0; i < d; ++i) op.support[i] = i;
    }
    op.matrix = std::move(M);
    return op;
}

MatC chain_matrix(Kind kind, double xi, int shift, int length) {
    const int nf = chain_fluid_count(shift);
    auto active = [&](int a) {
        if (kind == Kind::B1) return a < nf;
        if (kind == Kind::B2) return a >= nf;
        return true;
    };
    MatC M = MatC::Zero(length, length);
    for (int a = 0; a < length; ++a) {
        if (!active(a)) continue;
        M(a, a) = -double(a + shift) - (kind == Kind::A ? 2.0 : 0.0);
        if (a + 1 < length && active(a + 1)) {
            cxd v(0.0, -xi * std::sqrt(double(a + 1)));
            M(a + 1, a) = v;
            M(a, a + 1) = v;
        }
    }
    if ((kind == Kind::B || kind == Kind::B1) && shift == 0 && length > 1) M(1, 0) += cxd(0.0, -1.0 / xi);
    return M;
}

SpMatC chain_sparse(Kind kind, double xi, int shift, int length) {
    MatC M = chain_matrix(kind, xi, shift, length);
    return M.sparseView();
}

int semigroup_padding(double xi, double t, int max_pad) {
    if (t <= 0.0 || xi == 0.0) return 0;
    const double rho = std::exp(-t);
    const double c = (1.0 - rho) / (1.0 + rho);
    const double a = 2.0 * variance_D(t) / (1.0 - rho * rho);
    double xi_eff = xi;
    if (a > 0.0) xi_eff = std::min(xi, std::sqrt(46.0 / a));
    const double th = c * xi_eff;
    return std::min(max_pad, int(std::ceil(th * th + 7.0 * th + 16.0)));
}

// ---- BlockOp -----------------------------------------------------------

BlockOp BlockOp::zero(BasisPtr b) {
    BlockOp o;
    o.basis = b;
    for (const auto& c : b->chains()) o.blocks.push_back(MatC::Zero(c.length(), c.length()));
    return o;
}

BlockOp BlockOp::identity(BasisPtr b) {
    BlockOp o;
    o.basis = b;
    for (const auto& c : b->chains()) o.blocks.push_back(MatC::Identity(c.length(), c.length()));
    return o;
}

MatC BlockOp::dense() const {
    const int d = basis->dimension();
    MatC M = MatC::Zero(d, d);
    const auto& ch = basis->chains();
    for (std::size_t c = 0; c < ch.size(); ++c)
        for (int i = 0; i < ch[c].length(); ++i)
            for (int j = 0; j < ch[c].length(); ++j) M(ch[c].idx[i], ch[c].idx[j]) = blocks[c](i, j);
    return M;
}

VecC BlockOp::apply(const VecC& f) const {
    VecC g = VecC::Zero(f.size());
    const auto& ch = basis->chains();
    for (std::size_t c = 0; c < ch.size(); ++c) {
        const int m = ch[c].length();
        VecC x(m);
        for (int i = 0; i < m; ++i) x(i) = f(ch[c].idx[i]);
        VecC y = blocks[c] * x;
        for (int i = 0; i < m; ++i) g(ch[c].idx[i]) = y(i);
    }
    return g;
}

static double spectral_norm(const MatC& M) {
    if (M.size() == 0) return 0.0;
    if (M.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    Eigen::JacobiSVD<MatC> svd(M);
    return svd.singularValues()(0);
}

double BlockOp::norm() const {
    double n = 0.0;
    for (const auto& B : blocks) n = std::max(n, spectral_norm(B));
    return n;
}

double BlockOp::norm_xi(double xi) const {
    double n = 0.0;
    for (std::size_t c = 0; c < blocks.size(); ++c) {
        if (basis->chains()[c].shift == 0) {
            MatC W = blocks[c];
            W.row(0) *= std::sqrt(1.0 + 1.0 / (xi * xi));
            n = std::max(n, spectral_norm(W));
        } else {
            n = std::max(n, spectral_norm(blocks[c]));
        }
    }
    return n;
}

double BlockOp::norm_xi_xi(double xi) const {
    double n = 0.0;
    const double w = std::sqrt(1.0 + 1.0 / (xi * xi));
    for (std::size_t c = 0; c < blocks.size(); ++c) {
        if (basis->chains()[c].shift == 0) {
            MatC W = blocks[c];
            W.row(0) *= w;
            W.col(0) /= w;
            n = std::max(n, spectral_norm(W));
        } else {
            n = std::max(n, spectral_norm(blocks[c]));
        }
    }
    return n;
}

BlockOp& BlockOp::operator+=(const BlockOp& o) {
    for (std::size_t c = 0; c < blocks.size(); ++c) blocks[c] += o.blocks[c];
    return *this;
}
BlockOp& BlockOp::operator-=(const BlockOp& o) {
    for (std::size_t c = 0; c < blocks.size(); ++c) blocks[c] -= o.blocks[c];
    return *this;
}
BlockOp& BlockOp::operator*=(cxd s) {
    for (auto& B : blocks) B *= s;
    return *this;
}
BlockOp operator+(BlockOp a, const BlockOp& b) { return a += b; }
BlockOp operator-(BlockOp a, const BlockOp& b) { return a -= b; }
BlockOp operator*(cxd s, BlockOp a) { return a *= s; }

// ---- semigroups ---------------------------------------------------------

namespace {

// Zero rows/cols outside the support of a projected kind on a chain.
void mask_support(Kind kind, int shift, MatC& E) {
    const int nf = chain_fluid_count(shift);
    for (int a = 0; a < E.rows(); ++a) {
        bool in = kind == Kind::B1 ? a < nf : (kind == Kind::B2 ? a >= nf : true);
        if (!in) {
            E.row(a).setZero();
            E.col(a).setZero();
        }
    }
}

bool has_special_chain(Kind kind, int shift) {
    if (kind == Kind::A) return false;
    if (kind == Kind::B) return shift == 0;
    return shift <= 1;  // B1, B2
}

}  // namespace

SemigroupEval semigroup(const ModeOperator& op, double t) {
    if (!(t >= 0.0)) throw UsageError("semigroup: t must be >= 0");
    const BasisSpec& b = *op.basis;
    SemigroupEval ev;
    ev.op = op;
    ev.t = t;
    const int d = b.dimension();
    ev.result = MatC::Zero(d, d);
    // the assembled matrix is block diagonal over chains; exponentiate block by block
    for (const auto& ch : b.chains()) {
        const int m = ch.length();
        MatC blk(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) blk(i, j) = op.matrix(ch.idx[i], ch.idx[j]);
        ExpmResult r = expm_pade13(t * blk);
        ev.backward_error = std::max(ev.backward_error, r.backward_error);
        mask_support(op.kind, ch.shift, r.value);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) ev.result(ch.idx[i], ch.idx[j]) = r.value(i, j);
    }
    return ev;
}

std::vector<cxd> spectrum(const ModeOperator& op) {
    const BasisSpec& b = *op.basis;
    std::vector<cxd> ev;
    for (const auto& ch : b.chains()) {
        std::vector<int> keep;
        for (int a = 0; a < ch.length(); ++a) {
            int i = ch.idx[a];
            bool in = op.kind == Kind::B1 ? b.in_projection(i, Proj::P2)
                                          : (op.kind == Kind::B2 ? b.in_projection(i, Proj::P3) : true);
            if (in) keep.push_back(i);
        }
        if (keep.empty()) continue;
        const int m = int(keep.size());
        MatC blk(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) blk(i, j) = op.matrix(keep[i], keep[j]);
        Eigen::ComplexEigenSolver<MatC> es(blk, false);
        if (es.info() != Eigen::Success) throw NumericalError("spectrum: eigensolver did not converge");
        for (int i = 0; i < m; ++i) ev.push_back(es.eigenvalues()(i));
    }
    std::sort(ev.begin(), ev.end(), [](cxd a, cxd b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

BlockOp semigroup_blocks(Kind kind, double xi, double t, BasisPtr basis, int pad) {
    check_xi(kind, xi);
    if (!(t >= 0.0)) throw UsageError("semigroup_blocks: t must be >= 0");
    if (pad < 0) pad = kind == Kind::B1 ? 0 : semigroup_padding(xi, t);
    const int N = basis->max_degree();
    BlockOp out = BlockOp::zero(basis);
    // plain chain L - i xi v1 (no projection, no Poisson), shared by all chains
    // without special structure; shift s multiplies it by e^{-s t}
    MatC plain;
    auto get_plain = [&]() -> const MatC& {
        if (plain.size() == 0) {
            MatC G = chain_matrix(Kind::A, xi, 0, N + 1 + pad);
            G.diagonal().array() += 2.0;
            plain = expm_pade13(t * G).value;
        }
        return plain;
    };
    std::map<int, MatC> special;
    const auto& chains = basis->chains();
    for (std::size_t c = 0; c < chains.size(); ++c) {
        const Chain& ch = chains[c];
        const int m = ch.length();
        if (has_special_chain(kind, ch.shift)) {
            auto it = special.find(ch.shift);
            if (it == special.end()) {
                const int len = kind == Kind::B1 ? m : m + pad;
                MatC E = expm_pade13(t * chain_matrix(kind, xi, ch.shift, len)).value;
                mask_support(kind, ch.shift, E);
                it = special.emplace(ch.shift, std::move(E)).first;
            }
            out.blocks[c] = it->second.topLeftCorner(m, m);
        } else if (kind == Kind::B1) {
            out.blocks[c].setZero();  // no fluid indices on this chain
        } else {
            const double shift = ch.shift + (kind == Kind::A ? 2.0 : 0.0);
            out.blocks[c] = std::exp(-shift * t) * get_plain().topLeftCorner(m, m);
        }
    }
    return out;
}

double sparse_norm1(const SpMatC& S) {
    double n = 0.0;
    for (int k = 0; k < S.outerSize(); ++k) {
        double s = 0.0;
        for (SpMatC::InnerIterator it(S, k); it; ++it) s += std::abs(it.value());
        n = std::max(n, s);
    }
    return n;
}

VecC semigroup_apply(Kind kind, double xi, double t, const BasisSpec& basis, const VecC& f, int pad) {
    check_xi(kind, xi);
    if (f.size() != basis.dimension()) throw UsageError("semigroup_apply: size mismatch");
    if (pad < 0) pad = kind == Kind::B1 ? 0 : semigroup_padding(xi, t);
    VecC g = VecC::Zero(f.size());
    for (const auto& ch : basis.chains()) {
        const int m = ch.length();
        bool any = false;
        for (int a = 0; a < m; ++a) any = any || f(ch.idx[a]) != 0.0;
        if (!any) continue;
        const int len = kind == Kind::B1 ? m : m + pad;
        SpMatC G = chain_sparse(kind, xi, ch.shift, len);
        MatC x = MatC::Zero(len, 1);
        for (int a = 0; a < m; ++a) x(a, 0) = f(ch.idx[a]);
        if (kind == Kind::B1 || kind == Kind::B2) {
            MatC E = MatC::Identity(len, len);
            mask_support(kind, ch.shift, E);
            x = E * x;
        }
        MatC y = expmv([&](const MatC& X) { return MatC(G * X); }, sparse_norm1(G), t, x);
        for (int a = 0; a < m; ++a) g(ch.idx[a]) = y(a, 0);
    }
    return g;
}

// ---- level systems ------------------------------------------------------

SpMatC level_generator(const LevelSystem& sys, std::vector<int>* offsets) {
    const int L = int(sys.diag.size());
    std::vector<int> off(L + 1, 0);
    for (int l = 0; l < L; ++l) off[l + 1] = off[l] + int(sys.diag[l].rows());
    std::vector<Eigen::Triplet<cxd>> trip;
    auto put = [&](const MatC& M, int r0, int c0) {
        for (int j = 0; j < M.cols(); ++j)
            for (int i = 0; i < M.rows(); ++i)
                if (M(i, j) != 0.0) trip.emplace_back(r0 + i, c0 + j, M(i, j));
    };
    for (int l = 0; l < L; ++l) put(sys.diag[l], off[l], off[l]);
    for (const auto& c : sys.coupling) {
        if (c.from < 0 || c.to >= L || c.from >= c.to) throw UsageError("level coupling must point forward");
        put(c.C, off[c.to], off[c.from]);
    }
    SpMatC G(off[L], off[L]);
    G.setFromTriplets(trip.begin(), trip.end());
    if (offsets) *offsets = off;
    return G;
}

std::vector<std::vector<MatC>> solve_levels(const LevelSystem& sys, const std::vector<double>& t_grid,
                                            bool force_matrix_free) {
    const int L = int(sys.diag.size());
    if (L == 0 || int(sys.init.size()) != L) throw UsageError("solve_levels: inconsistent level structure");
    std::vector<int> off;
    const SpMatC Gs = level_generator(sys, &off);
    const int S = off[L];
    const int p = int(sys.init[0].cols());
    MatC Y = MatC::Zero(S, p);
    for (int l = 0; l < L; ++l)
        if (sys.init[l].size() > 0) Y.block(off[l], 0, sys.diag[l].rows(), p) = sys.init[l];
    const bool dense = !force_matrix_free && S <= 420;
    const MatC G = dense ? MatC(Gs) : MatC();
    const double n1 = sparse_norm1(Gs);
    std::vector<std::vector<MatC>> out;
    double t_prev = 0.0, dt_cached = -1.0;
    MatC E;
    for (double t : t_grid) {
        if (t < t_prev) throw UsageError("solve_levels: t_grid must be increasing and >= 0");
        const double dt = t - t_prev;
        if (dt > 0.0) {
            if (dense) {
                if (std::abs(dt - dt_cached) > 1e-14 * std::max(1.0, dt)) {
                    E = expm_pade13(dt * G).value;
                    dt_cached = dt;
                }
                Y = E * Y;
            } else {
                Y = expmv([&](const MatC& X) { return MatC(Gs * X); }, n1, dt, Y);
            }
        }
        std::vector<MatC> lv(L);
        for (int l = 0; l < L; ++l) lv[l] = Y.block(off[l], 0, sys.diag[l].rows(), p);
        out.push_back(std::move(lv));
        t_prev = t;
    }
    return out;
}

// ---- spectral gap -------------------------------------------------------

GapScan spectral_gap_scan(BasisPtr basis, const std::vector<double>& xi_grid, double threshold, double r0_cap) {
    GapScan g;
    g.xi = xi_grid;
    g.threshold = threshold;
    g.r0_cap = r0_cap;
    g.max_re.assign(xi_grid.size(), 0.0);
    parallel_for(xi_grid.size(), [&](std::size_t i) {
        auto ev = spectrum(assemble(Kind::B, xi_grid[i], basis));
        g.max_re[i] = ev.front().real();
    });
    std::size_t last_ok = 0;
    bool any = false;
    for (std::size_t i = 0; i < xi_grid.size(); ++i) {
        if (xi_grid[i] > r0_cap || g.max_re[i] > threshold) break;
        last_ok = i;
        any = true;
    }
    g.r0_hat = any ? xi_grid[last_ok] : 0.0;
    double worst = -INFINITY;
    for (std::size_t i = 0; i < xi_grid.size(); ++i)
        if (xi_grid[i] > g.r0_hat) worst = std::max(worst, g.max_re[i]);
    g.beta0_hat = std::isfinite(worst) ? -worst : 0.0;
    g.beta1_hat = std::min(g.beta0_hat, 0.5);
    g.eta0_hat = 0.5 * g.beta1_hat;
    return g;
}

// ---- regularization probe ----------------------------------------------

VecC coherent_state(double theta, int length) {
    VecC c = VecC::Zero(length);
    if (theta == 0.0) {
        c(0) = 1.0;
        return c;
    }
    // log magnitudes first; when the state is centred beyond the chain the
    // truncated vector is rescaled so that it stays representable
    std::vector<double> lm(length);
    double logmag = -0.5 * theta * theta, top = -INFINITY;
    for (int n = 0; n < length; ++n) {
        if (n > 0) logmag += std::log(theta) - 0.5 * std::log(double(n));
        lm[n] = logmag;
        top = std::max(top, logmag);
    }
    const double shift = top < -700.0 ? top : 0.0;
    for (int n = 0; n < length; ++n) c(n) = std::exp(lm[n] - shift) * std::pow(kI, n % 4);
    return c;
}

namespace {

double chain_exp_norm(double xi, double t) {
    const int m = 8 + semigroup_padding(xi, t, 4000);
    const SpMatC G = chain_sparse(Kind::A, xi, 0, m);
    const SpMatC Gh = SpMatC(G.adjoint());
    const double n1 = std::max(sparse_norm1(G), sparse_norm1(Gh));
    const double c = std::tanh(0.5 * t);
    auto fwd = [&](const MatC& X) { return expmv([&](const MatC& Z) { return MatC(G * Z); }, n1, t, X); };
    auto adj = [&](const MatC& X) { return expmv([&](const MatC& Z) { return MatC(Gh * Z); }, n1, t, X); };
    return power_norm(fwd, adj, coherent_state(c * xi, m), 40, 1e-9);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

}  // namespace

double scaled_semigroup_norm(int k, double t, double* argmax_xi) {
    if (k < 0 || !(t > 0.0)) throw UsageError("scaled_semigroup_norm: need k >= 0, t > 0");
    if (k == 0) {
        // ||e^{tA(xi)}|| is maximal as xi -> 0
        if (argmax_xi) *argmax_xi = 0.0;
        return chain_exp_norm(1e-9, t);
    }
    const double rho = std::exp(-t);
    const double a = 2.0 * variance_D(t) / (1.0 - rho * rho);
    const double guess = std::sqrt(k / (2.0 * a));
    // coarse log scan then golden refinement of log|xi|
    auto val = [&](double lx) {
        double xi = std::exp(lx);
        return std::log(std::pow(xi, k) * chain_exp_norm(xi, t));
    };
    double best_lx = std::log(guess), best = -INFINITY;
    for (int i = -2; i <= 2; ++i) {
        double lx = std::log(guess) + 0.25 * i;
        double v = val(lx);
        if (v > best) {
            best = v;
            best_lx = lx;
        }
    }
    double res = golden_max(val, best_lx - 0.25, best_lx + 0.25, 10);
    if (argmax_xi) *argmax_xi = std::exp(best_lx);
    return std::exp(std::max(res, best));
}

double scaled_semigroup_norm_exact(int k, double t) {
    const double rho = std::exp(-t);
    const double a = 2.0 * variance_D(t) / (1.0 - rho * rho);
    if (k == 0) return std::exp(-2.0 * t);
    return std::exp(-2.0 * t) * std::pow(k / (2.0 * a), 0.5 * k) * std::exp(-0.5 * k);
}

ProbeFit semigroup_scaling_probe(int k, const std::vector<double>& t_grid) {
    ProbeFit p;
    p.t = t_grid;
    p.norm.assign(t_grid.size(), 0.0);
    parallel_for(t_grid.size(), [&](std::size_t i) { p.norm[i] = scaled_semigroup_norm(k, t_grid[i]); });
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        lx.push_back(std::log(t_grid[i]));
        ly.push_back(std::log(p.norm[i]));
    }
    LineFit f = fit_line(lx, ly);
    p.exponent = -f.slope;
    p.residual = f.residual;
    return p;
}

ProbeFit semigroup_rate_probe(int k, const std::vector<double>& t_grid) {
    ProbeFit p;
    p.t = t_grid;
    p.norm.assign(t_grid.size(), 0.0);
    parallel_for(t_grid.size(), [&](std::size_t i) { p.norm[i] = scaled_semigroup_norm(k, t_grid[i]); });
    std::vector<double> ly;
    for (double v : p.norm) ly.push_back(std::log(v));
    LineFit f = fit_line(t_grid, ly);
    p.exponent = -f.slope;
    p.residual = f.residual;
    return p;
}

}  // namespace vpfp
