#include "suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>

#include <Eigen/Eigenvalues>

#include "vpfp/assembly.hpp"
#include "vpfp/fluid.hpp"
#include "vpfp/highfreq.hpp"
#include "vpfp/kernel.hpp"
#include "vpfp/lowfreq.hpp"
#include "vpfp/modes.hpp"
#include "vpfp/nonlinear.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp::suites {

using nlohmann::json;

namespace {

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double finite_or(double x, double big) { return std::isfinite(x) ? x : big; }

// JSON cannot carry inf; exponents that are super-algebraic are written as 1e300.
json num(double x) { return std::isnan(x) ? json(nullptr) : json(finite_or(x, x > 0 ? 1e300 : -1e300)); }

// ---- 1: fluid eigenvalues ----
Verdict fluid_eigenvalues(const Options&) {
    Verdict v;
    const auto xi = logspace(1e-3, 10.0, 50);
    double worst = 0.0, worst_formula = 0.0;
    for (double x : xi) {
        Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(fluid_block(x));
        const auto sys = solve_fluid_eigensystem(x);
        const double s = std::sqrt(4.0 * x * x + 3.0);
        const cxd lam0(-0.5, -0.5 * s);
        const cxd expect[4] = {lam0, std::conj(lam0), -1.0, -1.0};
        std::vector<bool> used(4, false);
        for (const cxd& e : expect) {
            int best = -1;
            for (int i = 0; i < 4; ++i)
                if (!used[i] && (best < 0 || std::abs(es.eigenvalues()[i] - e) < std::abs(es.eigenvalues()[best] - e)))
                    best = i;
            used[best] = true;
            worst = std::max(worst, std::abs(es.eigenvalues()[best] - e));
        }
        worst_formula = std::max(worst_formula, std::abs(sys.lambdas[0] - lam0));
    }
    v.pass = worst <= 1e-10 && worst_formula <= 1e-10;
    v.summary = "max |lambda_num - closed form| = " + fmt("%.3e", worst) + ", module lambda_0 error " +
                fmt("%.3e", worst_formula) + " (tol 1e-10)";
    v.detail = {{"max_error", worst}, {"module_error", worst_formula}, {"nodes", xi.size()}};
    return v;
}

// ---- 2: spectral gap ----
GapScan gap_scan(bool quick) {
    const int N = quick ? 8 : 16;
    return spectral_gap_scan(build_basis(N), logspace(1e-3, 60.0, quick ? 40 : 120), -0.45, 1.0);
}

Verdict spectral_gap(const Options& opt) {
    Verdict v;
    const GapNumbers& g = measured_gap(opt.quick);
    v.pass = g.r0_hat > 0.0 && g.beta0_hat > 0.0;
    v.summary = "r0_hat = " + fmt("%.4g", g.r0_hat) + ", beta0_hat = " + fmt("%.4g", g.beta0_hat) +
                ", eta0_hat = " + fmt("%.4g", g.eta0_hat) + " at N=" + std::to_string(g.max_degree);
    v.detail = {{"r0_hat", g.r0_hat},
                {"beta0_hat", g.beta0_hat},
                {"beta1_hat", g.beta1_hat},
                {"eta0_hat", g.eta0_hat},
                {"max_degree", g.max_degree},
                {"threshold", -0.45}};
    return v;
}

// ---- 3: contraction ----
Verdict contraction(const Options& opt) {
    Verdict v;
    const int N = opt.quick ? 8 : 12;
    const int n_f = opt.quick ? 20 : 100;
    auto basis = build_basis(N);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> lu(std::log(1e-2), std::log(20.0)), lt(std::log(1e-2), std::log(5.0));
    std::vector<VecC> fs(n_f);
    for (auto& f : fs) {
        f.resize(basis->dimension());
        for (int i = 0; i < f.size(); ++i) f[i] = cxd(nd(rng), nd(rng));
    }
    double worst = 0.0;
    for (int p = 0; p < 20; ++p) {
        const double xi = std::exp(lu(rng)), t = std::exp(lt(rng));
        const BlockOp half = semigroup_blocks(Kind::B, xi, 0.5 * t, basis);
        const BlockOp full = semigroup_blocks(Kind::B, xi, t, basis);
        for (const auto& f : fs) {
            const double n0 = weighted_norm(f, xi);
            const double n1 = weighted_norm(half.apply(f), xi);
            const double n2 = weighted_norm(full.apply(f), xi);
            worst = std::max({worst, (n1 - n0) / n0, (n2 - n1) / n0});
        }
    }
    v.pass = worst <= 1e-8;
    v.summary = "max relative increase of ||e^{tB}f||_xi = " + fmt("%.3e", worst) + " (tol 1e-8), " +
                std::to_string(n_f) + " f x 20 (xi, t)";
    v.detail = {{"max_violation", worst}, {"samples", n_f}, {"pairs", 20}, {"max_degree", N}};
    return v;
}

// ---- 4: kernel identity ----
Verdict kernel_identity(const Options& opt) {
    Verdict v;
    const int N = opt.quick ? 6 : 12;
    auto basis = build_basis(N);
    double worst = 0.0;
    json cases = json::array();
    for (double t : {0.1, 0.5, 2.0})
        for (double xi : {0.0, 1.0, 5.0}) {
            const MatC H = hermite_matrix_of_G1_hat(t, xi, *basis);
            const MatC E = semigroup_blocks(Kind::A, xi, t, basis).dense();
            const double err = (H - E).cwiseAbs().maxCoeff();
            worst = std::max(worst, err);
            cases.push_back({{"t", t}, {"xi", xi}, {"max_entry_error", err}});
        }
    v.pass = worst <= 1e-6;
    v.summary = "max entrywise |<G1_hat> - e^{tA}| = " + fmt("%.3e", worst) + " (tol 1e-6), N=" + std::to_string(N);
    v.detail = {{"cases", cases}, {"max_error", worst}};
    return v;
}

// ---- 5: Chapman-Kolmogorov and symmetry ----
Verdict chapman_kolmogorov(const Options&) {
    Verdict v;
    const Vec3 xi{1.0, 0.0, 0.0};
    const std::vector<Vec3> probes = {{0.3, -0.2, 0.1}, {-0.5, 0.4, 0.0}, {1.0, 0.2, -0.7}};
    const Vec3 u{-0.1, 0.4, 0.2};
    std::vector<double> edges;
    for (int i = 0; i <= 16; ++i) edges.push_back(-8.0 + i);
    const QuadRule q = composite_legendre(edges, 6);
    const std::size_t m = q.x.size();
    double worst_ck = 0.0, worst_sym = 0.0;
    json cases = json::array();
    for (auto [t, s] : {std::pair{0.5, 0.5}, std::pair{0.2, 1.0}, std::pair{1.0, 1.0}}) {
        // Ghat(s, xi, w; u) on the whole w grid, then contract against Ghat(t, xi, v; w)
        std::vector<cxd> right(m * m * m);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                for (std::size_t c = 0; c < m; ++c)
                    right[(a * m + b) * m + c] = eval_G1_hat(s, xi, {q.x[a], q.x[b], q.x[c]}, u);
        for (const Vec3& vv : probes) {
            cxd sum = 0.0;
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b)
                    for (std::size_t c = 0; c < m; ++c)
                        sum += q.w[a] * q.w[b] * q.w[c] * eval_G1_hat(t, xi, vv, {q.x[a], q.x[b], q.x[c]}) *
                               right[(a * m + b) * m + c];
            const cxd direct = eval_G1_hat(t + s, xi, vv, u);
            const double err = std::abs(sum - direct) / std::abs(direct);
            worst_ck = std::max(worst_ck, err);
            const cxd g1 = eval_G1_hat(t, xi, vv, u), g2 = eval_G1_hat(t, xi, u, vv);
            worst_sym = std::max(worst_sym, std::abs(g1 - g2) / std::abs(g1));
            cases.push_back({{"t", t}, {"s", s}, {"v", vv}, {"relative_error", err}});
        }
    }
    v.pass = worst_ck <= 1e-5 && worst_sym <= 1e-12;
    v.summary = "Chapman-Kolmogorov rel. error " + fmt("%.3e", worst_ck) + " (tol 1e-5), symmetry " +
                fmt("%.3e", worst_sym) + " (tol 1e-12)";
    v.detail = {{"cases", cases}, {"max_ck_error", worst_ck}, {"max_symmetry_error", worst_sym}};
    return v;
}

// ---- 6: regularization scaling ----
Verdict regularization(const Options& opt) {
    Verdict v;
    const auto ts = logspace(1e-2, 1e-1, opt.quick ? 3 : 5);
    const auto tl = linspace(4.0, 12.0, opt.quick ? 3 : 5);
    bool ok = true;
    json rows = json::array();
    std::string s;
    for (int k : {1, 2}) {
        const ProbeFit f = semigroup_scaling_probe(k, ts);
        const bool good = std::abs(f.exponent - 1.5 * k) <= 0.3;
        ok = ok && good;
        rows.push_back({{"k", k}, {"exponent", f.exponent}, {"target", 1.5 * k}, {"residual", f.residual}});
        s += "k=" + std::to_string(k) + " exponent " + fmt("%.3f", f.exponent) + " (target " +
             fmt("%.1f", 1.5 * k) + "); ";
    }
    for (int k : {1, 2}) {
        const ProbeFit f = semigroup_rate_probe(k, tl);
        const bool good = f.exponent >= 1.9;
        ok = ok && good;
        rows.push_back({{"k", k}, {"rate", f.exponent}, {"min_rate", 1.9}, {"residual", f.residual}});
        s += "k=" + std::to_string(k) + " rate " + fmt("%.3f", f.exponent) + "; ";
    }
    v.pass = ok;
    v.summary = s + "tol 0.3 / rate >= 1.9";
    v.detail = {{"fits", rows}, {"t_small", ts}, {"t_large", tl}};
    return v;
}

// ---- 7: low-frequency ladder ----
Verdict low_ladder(const Options& opt) {
    Verdict v;
    const int N = opt.quick ? 8 : 16;
    const LadderFit f = fit_low_ladder(3, 1.0, logspace(1e-2, 1e-1, opt.quick ? 4 : 8), build_basis(N), 0.5);
    bool ok = true;
    std::string s;
    json rows = json::array();
    for (int k = 0; k <= 3; ++k) {
        const bool gi = std::abs(f.I_exp[k] - (2 * k - 1)) <= 0.2;
        const bool gj = std::abs(f.J_exp[k] - 2 * k) <= 0.2;
        const bool gv = f.V_exp[k] >= 2 * k + 1 - 0.2;
        ok = ok && gi && gj && gv;
        rows.push_back({{"k", k},
                        {"I_exponent", f.I_exp[k]},
                        {"J_exponent", f.J_exp[k]},
                        {"V_exponent", f.V_exp[k]},
                        {"I_residual", f.I_res[k]},
                        {"J_residual", f.J_res[k]},
                        {"V_residual", f.V_res[k]}});
        s += "k=" + std::to_string(k) + " I " + fmt("%.3f", f.I_exp[k]) + " J " + fmt("%.3f", f.J_exp[k]) + " V " +
             fmt("%.3f", f.V_exp[k]) + "; ";
    }
    v.pass = ok;
    v.summary = s + "t=1, N=" + std::to_string(N);
    v.detail = {{"fits", rows}, {"xi", f.xi}};
    return v;
}

// ---- 8: high-frequency ladder ----
Verdict high_ladder(const Options& opt) {
    Verdict v;
    const auto ts = logspace(2e-2, 1e-1, opt.quick ? 3 : 4);
    const int jmax = opt.quick ? 1 : 3;
    bool ok = true;
    std::string s;
    json rows = json::array();
    for (int j = 0; j <= jmax; ++j)
        for (int k = 0; k <= 2; ++k) {
            const ProbeFit f = high_scaling_probe(j, k, ts, 0.5);
            const double target = j - 1.5 * k;
            const bool good = std::abs(f.exponent - target) <= 0.3;
            ok = ok && good;
            rows.push_back({{"j", j}, {"k", k}, {"exponent", f.exponent}, {"target", target}, {"residual", f.residual}});
            s += "(" + std::to_string(j) + "," + std::to_string(k) + ") " + fmt("%.2f", f.exponent) + " ";
        }
    const int N = opt.quick ? 8 : 16;
    const XiFit r = fit_high_remainder(7, 1.0, logspace(1.0, 10.0, opt.quick ? 4 : 8), build_basis(N), 0.5);
    const bool gr = r.exponent <= -4.0 + 0.3;
    ok = ok && gr;
    v.pass = ok;
    v.summary = "t-exponents (j,k) " + s + "(tol 0.3); R_7 xi-exponent " + fmt("%.3f", r.exponent) + " (<= -3.7)";
    v.detail = {{"fits", rows},
                {"t_grid", ts},
                {"remainder", {{"k", 7}, {"exponent", r.exponent}, {"residual", r.residual}, {"xi", r.xi}, {"norm", r.norm}}}};
    return v;
}

// ---- 9: spatial exponents after reconstruction ----
}  // namespace

json fit_to_json(const DecayFit& f) {
    return {{"component", f.component},        {"t", f.t},           {"exponent_x", num(f.exponent_x)},
            {"rate_t", num(f.rate_t)},         {"x_lo", f.x_lo},     {"x_hi", f.x_hi},
            {"residual", num(f.residual)},     {"points", f.points}, {"super_algebraic", f.super_algebraic}};
}

namespace {

json fit_json(const DecayFit& f) { return fit_to_json(f); }

Verdict spatial_exponents(const Options& opt) {
    Verdict v;
    AssemblyConfig cfg;
    if (opt.quick) {
        cfg.max_degree = 8;
        cfg.grid = make_mode_grid(1e-3, 2.0, 60.0, 80, 120, 40);
    }
    auto basis = build_basis(cfg.max_degree);
    const auto ax = build_axisymmetric(*basis);
    const auto r = linspace(5.0, 50.0, 91);
    std::map<std::string, double> iso, mic;
    json fits = json::array();
    for (Data d : {Data::Isotropic, Data::Microscopic}) {
        const ModeResponse m = mode_response(2.0, Part::Full, d, cfg, basis, ax);
        const Profiles p = reconstruct_profiles(m, ax, r, cfg.sigma);
        for (const char* c : {"P0", "Pm", "P3"}) {
            DecayFit f = fit_profile(p, c, 5.0, 50.0);
            // below the error estimate inside the window: faster than any resolved power
            (d == Data::Isotropic ? iso : mic)[c] =
                f.super_algebraic ? std::numeric_limits<double>::infinity() : f.exponent_x;
            json j = fit_json(f);
            j["data"] = d == Data::Isotropic ? "isotropic" : "microscopic";
            fits.push_back(j);
        }
    }
    const std::map<std::string, double> floor_ = {{"P0", 3.7}, {"Pm", 1.7}, {"P3", 2.7}};
    bool ok = true;
    std::string s;
    for (const auto& [c, lo] : floor_) {
        const bool g1 = iso[c] >= lo;
        const bool g2 = mic[c] >= iso[c] + 0.7;
        ok = ok && g1 && g2;
        s += c + " " + fmt("%.3f", iso[c]) + " -> " + fmt("%.3f", mic[c]) + "; ";
    }
    v.pass = ok;
    v.summary = s + "t=2, |x| in [5,50] (inf = below noise floor)";
    v.detail = {{"fits", fits}, {"max_degree", cfg.max_degree}, {"grid_nodes", cfg.grid.nodes.size()}};
    return v;
}

// ---- 10: time rates ----
Verdict time_rates(const Options& opt) {
    Verdict v;
    const int N = opt.quick ? 8 : 16;
    auto basis = build_basis(N);
    const double R = 0.5;
    const auto ts = linspace(2.0, 10.0, opt.quick ? 3 : 5);
    const auto xl = logspace(1e-3, 2 * R, opt.quick ? 10 : 30);
    // ||G_H - W_7|| falls by ~12 orders between |xi| = 2 and 10; the sup sits near |xi| = 1
    const auto xh = logspace(R, 6.0, opt.quick ? 8 : 16);
    std::vector<std::vector<double>> low(xl.size()), high(xh.size());
    parallel_for(xl.size(), [&](std::size_t i) {
        const LowFreqResult res = solve_low(0, xl[i], ts, basis, R);
        for (const auto& g : res.G_L) low[i].push_back(g.dense().row(0).norm());
    });
    parallel_for(xh.size(), [&](std::size_t i) {
        const HighFreqResult res = solve_high(7, xh[i], ts, basis, R);
        for (const auto& g : res.sum.R) high[i].push_back(g.norm());
    });
    std::vector<double> ql(ts.size(), 0.0), qh(ts.size(), 0.0), arg_high(ts.size(), 0.0);
    for (std::size_t n = 0; n < ts.size(); ++n) {
        for (const auto& row : low) ql[n] = std::max(ql[n], row[n]);
        for (std::size_t i = 0; i < xh.size(); ++i)
            if (high[i][n] > qh[n]) {
                qh[n] = high[i][n];
                arg_high[n] = xh[i];
            }
    }
    const DecayFit fl = fit_rate("P0 G_L", ts, ql);
    const DecayFit fh = fit_rate("G_H - W_7", ts, qh);
    const GapNumbers& g = measured_gap(opt.quick);
    v.pass = fl.rate_t >= 0.20 && g.eta0_hat > 0.0 && fh.rate_t >= g.eta0_hat;
    v.summary = "P0 G_L rate " + fmt("%.3f", fl.rate_t) + " (>= 0.20); G_H - W_7 rate " + fmt("%.3f", fh.rate_t) +
                " (>= eta0_hat = " + fmt("%.3f", g.eta0_hat) + ")";
    v.detail = {{"low", fit_json(fl)}, {"high", fit_json(fh)}, {"t", ts}, {"sup_low", ql},
                {"sup_high", qh},      {"argmax_xi_high", arg_high}, {"eta0_hat", g.eta0_hat}};
    return v;
}

// ---- 11: nonlinear small-data run ----
Verdict nonlinear_run(const Options& opt) {
    Verdict v;
    const GapNumbers& g = measured_gap(opt.quick);
    std::map<bool, DecayReport> reps;
    json runs = json::array();
    for (bool neutral : {false, true}) {
        SimConfig c;
        c.neutral = neutral;
        c.seed = opt.seed;
        if (opt.quick) {
            c.max_degree = 6;
            c.t_end = 6.0;
        }
        RadialSolver solver(c);
        const Trajectory tr = evolve(solver, solver.initial_state(), c.t_end, c.dt, c.snapshot_every);
        reps[neutral] = decay_report(solver, tr);
        json fits = json::array();
        for (const auto& f : reps[neutral].fits) fits.push_back(fit_json(f));
        runs.push_back({{"neutral", neutral},
                        {"mass_drift_rate", reps[neutral].mass_drift_rate},
                        {"weighted_rate", num(reps[neutral].weighted_rate)},
                        {"gradv_slope", reps[neutral].gradv_slope},
                        {"fits", fits}});
    }
    auto alpha = [&](bool neutral, const std::string& c) {
        for (const auto& f : reps[neutral].fits)
            if (f.component == c) return 0.5 * f.exponent_x;  // (1+|x|^2)^{-alpha}
        return std::numeric_limits<double>::quiet_NaN();
    };
    const DecayReport& ch = reps[false];
    const bool drift = ch.mass_drift_rate <= 1e-10 && reps[true].mass_drift_rate <= 1e-10;
    const bool rate = ch.weighted_rate >= g.eta0_hat - 0.05 && reps[true].weighted_rate >= g.eta0_hat - 0.05;
    const double a0 = alpha(false, "P0"), am = alpha(false, "Pm+field"), a3 = alpha(false, "P3");
    const bool space = std::abs(a0 - 2.0) <= 0.3 && std::abs(am - 1.0) <= 0.3 && std::abs(a3 - 1.5) <= 0.3;
    const double gain = alpha(true, "P0") - a0;
    const bool neutral_gain = gain >= 0.4;
    const bool field = alpha(false, "field") >= 0.7;
    const bool gradv = std::abs(ch.gradv_slope + 0.5) <= 0.1;
    v.pass = drift && rate && space && neutral_gain && field && gradv;
    auto flag = [](bool b) { return b ? "ok" : "FAIL"; };
    v.summary = std::string("drift ") + fmt("%.1e", ch.mass_drift_rate) + " " + flag(drift) + "; rate " +
                fmt("%.3f", std::min(ch.weighted_rate, reps[true].weighted_rate)) + " " + flag(rate) +
                "; alpha P0/Pm+field/P3 " + fmt("%.2f", a0) + "/" + fmt("%.2f", am) + "/" + fmt("%.2f", a3) + " " +
                flag(space) + "; neutral gain " + fmt("%.2f", gain) + " " + flag(neutral_gain) + "; field " +
                fmt("%.2f", alpha(false, "field")) + " " + flag(field) + "; grad_v slope " +
                fmt("%.3f", ch.gradv_slope) + " " + flag(gradv);
    v.detail = {{"runs", runs},
                {"checks",
                 {{"mass_drift", drift},
                  {"weighted_rate", rate},
                  {"spatial_exponents", space},
                  {"neutral_gain", neutral_gain},
                  {"field", field},
                  {"gradv_slope", gradv}}},
                {"eta0_hat", g.eta0_hat}};
    return v;
}

// ---- 12: Picard contraction ----
Verdict picard(const Options& opt) {
    Verdict v;
    std::vector<double> ld, lr;
    json rows = json::array();
    for (double d : {1e-4, 1e-3, 1e-2}) {
        SimConfig c;
        c.delta0 = d;
        c.seed = opt.seed;
        if (opt.quick) {
            c.max_degree = 6;
            c.picard_t_end = 2.0;
        }
        RadialSolver solver(c);
        const IterationTrace tr = picard_solve(solver, solver.initial_state(), c.picard_max);
        ld.push_back(std::log(d));
        lr.push_back(std::log(tr.contraction_ratio));
        rows.push_back({{"delta0", d},
                        {"contraction_ratio", tr.contraction_ratio},
                        {"converged", tr.converged},
                        {"distances", tr.distances},
                        {"sup_weighted_norms", tr.sup_weighted_norms}});
    }
    const LineFit f = fit_line(ld, lr);
    v.pass = std::abs(f.slope - 1.0) <= 0.2;
    v.summary = "log-log slope of contraction ratio vs delta0 = " + fmt("%.3f", f.slope) + " (1 +- 0.2)";
    v.detail = {{"runs", rows}, {"slope", f.slope}, {"residual", f.residual}};
    return v;
}

struct Entry {
    const char* title;
    Verdict (*fn)(const Options&);
};

const std::vector<Entry>& table() {
    static const std::vector<Entry> t = {
        {"fluid eigenvalues", fluid_eigenvalues},
        {"spectral gap", spectral_gap},
        {"contraction", contraction},
        {"kernel identity", kernel_identity},
        {"Chapman-Kolmogorov and symmetry", chapman_kolmogorov},
        {"regularization scaling", regularization},
        {"low-frequency ladder", low_ladder},
        {"high-frequency ladder", high_ladder},
        {"spatial exponents", spatial_exponents},
        {"time rates", time_rates},
        {"nonlinear small-data run", nonlinear_run},
        {"Picard contraction", picard},
    };
    return t;
}

}  // namespace

const GapNumbers& measured_gap(bool quick) {
    static std::mutex m;
    static std::map<bool, GapNumbers> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(quick);
    if (it != cache.end()) return it->second;
    const GapScan s = gap_scan(quick);
    GapNumbers g;
    g.r0_hat = s.r0_hat;
    g.beta0_hat = s.beta0_hat;
    g.beta1_hat = s.beta1_hat;
    g.eta0_hat = s.eta0_hat;
    g.max_degree = quick ? 8 : 16;
    return cache[quick] = g;
}

int criterion_count() { return int(table().size()); }

std::vector<int> criteria_of(const std::string& suite) {
    static const std::map<std::string, std::vector<int>> m = {
        {"kernel", {1, 2, 3, 4, 5, 6}}, {"lowfreq", {7, 10}},      {"highfreq", {8}},
        {"assembly", {9}},              {"nonlinear", {11, 12}}, {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
    };
    auto it = m.find(suite);
    if (it == m.end()) throw UsageError("unknown suite '" + suite + "'");
    return it->second;
}

Verdict run_criterion(int id, const Options& opt) {
    if (id < 1 || id > criterion_count()) throw UsageError("unknown criterion " + std::to_string(id));
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v = table()[id - 1].fn(opt);
    v.id = id;
    v.title = table()[id - 1].title;
    v.smoke = opt.quick;
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

json to_json(const Verdict& v) {
    return {{"criterion", v.id},      {"title", v.title}, {"pass", v.pass},
            {"smoke", v.smoke},       {"summary", v.summary}, {"detail", v.detail}};
}

std::string format_line(const Verdict& v) {
    char head[96];
    std::snprintf(head, sizeof head, "criterion %2d %-4s %-32s", v.id, v.pass ? "PASS" : "FAIL", v.title.c_str());
    return std::string(head) + (v.smoke ? " [smoke] " : " ") + v.summary;
}

}  // namespace vpfp::suites
