#include "vpfp/lowfreq.hpp"

#include <cmath>
#include <map>

#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

namespace {

double bump_integral(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    static const QuadRule unit = gauss_legendre(64, 0.0, 1.0);
    auto phi = [](double u) { return (u <= 0.0 || u >= 1.0) ? 0.0 : std::exp(-1.0 / (u * (1.0 - u))); };
    static const double total = [&] {
        double a = 0.0;
        for (std::size_t i = 0; i < unit.x.size(); ++i) a += unit.w[i] * phi(unit.x[i]);
        return a;
    }();
    // integrate from the nearer end for accuracy
    double part = 0.0;
    if (s <= 0.5) {
        for (std::size_t i = 0; i < unit.x.size(); ++i) part += s * unit.w[i] * phi(s * unit.x[i]);
        return part / total;
    }
    const double r = 1.0 - s;
    for (std::size_t i = 0; i < unit.x.size(); ++i) part += r * unit.w[i] * phi(1.0 - r * unit.x[i]);
    return 1.0 - part / total;
}

MatC chain_v1(int m) {
    MatC V = MatC::Zero(m, m);
    for (int a = 0; a + 1 < m; ++a) V(a, a + 1) = V(a + 1, a) = std::sqrt(double(a + 1));
    return V;
}

MatC mask(int m, int nf, bool fluid) {
    MatC P = MatC::Zero(m, m);
    for (int a = 0; a < m; ++a)
        if ((a < nf) == fluid) P(a, a) = 1.0;
    return P;
}

}  // namespace

double cutoff_chi(double xi, double R, Cutoff which) {
    if (!(R > 0.0)) throw UsageError("cutoff_chi: R must be > 0");
    const double chiR = bump_integral((xi - R) / R);
    return which == Cutoff::High ? chiR : 1.0 - chiR;
}

LowFreqResult solve_low(int K, double xi, const std::vector<double>& t_grid, BasisPtr basis, double R) {
    if (K < 0) throw UsageError("solve_low: k_max must be >= 0");
    if (!(xi > 0.0)) throw UsageError("solve_low: xi_mag must be > 0");
    const double chi = cutoff_chi(xi, R, Cutoff::Low);
    const std::size_t nt = t_grid.size();
    LowFreqResult res;
    for (int k = 0; k <= K; ++k) {
        LowFreqIterate it;
        it.k = k;
        it.xi_mag = xi;
        it.t_grid = t_grid;
        it.I.assign(nt, BlockOp::zero(basis));
        it.J.assign(nt, BlockOp::zero(basis));
        res.iterates.push_back(std::move(it));
        Remainder rm;
        rm.k = k;
        rm.xi_mag = xi;
        rm.t_grid = t_grid;
        rm.V.assign(nt, BlockOp::zero(basis));
        res.remainders.push_back(std::move(rm));
    }
    res.G_L.assign(nt, BlockOp::zero(basis));
    if (chi == 0.0) {
        for (auto& r : res.remainders) r.Z_grad_e1.assign(nt, VecC::Zero(basis->dimension()));
        return res;
    }
    const auto& chains = basis->chains();
    // levels: I_0, J_0, ..., I_K, J_K, V_0..V_K, G
    auto lvl_I = [](int k) { return 2 * k; };
    auto lvl_J = [](int k) { return 2 * k + 1; };
    auto lvl_V = [&](int k) { return 2 * (K + 1) + k; };
    const int lvl_G = 3 * (K + 1);
    std::map<int, std::vector<std::vector<MatC>>> solved;  // by shift, for shifts 0 and 1
    for (int s : {0, 1}) {
        int m = -1;
        for (const auto& c : chains)
            if (c.shift == s) m = c.length();
        if (m < 0) continue;
        const int nf = chain_fluid_count(s);
        const MatC B1 = chain_matrix(Kind::B1, xi, s, m);
        const MatC B2 = chain_matrix(Kind::B2, xi, s, m);
        const MatC B = chain_matrix(Kind::B, xi, s, m);
        const MatC V1 = chain_v1(m);
        const MatC P2 = mask(m, nf, true), P3 = mask(m, nf, false);
        const MatC C_IJ = cxd(0.0, -xi) * P3 * V1 * P2;  // I_k -> J_k
        const MatC C_JI = cxd(0.0, -xi) * P2 * V1 * P3;  // J_{k-1} -> I_k, J_k -> V_k
        LevelSystem sys;
        for (int k = 0; k <= K; ++k) {
            sys.diag.push_back(B1);
            sys.diag.push_back(B2);
        }
        for (int k = 0; k <= K; ++k) sys.diag.push_back(B);
        sys.diag.push_back(B);
        sys.init.assign(sys.diag.size(), MatC::Zero(m, m));
        sys.init[lvl_I(0)] = P2;
        sys.init[lvl_J(0)] = P3;
        sys.init[lvl_G] = MatC::Identity(m, m);
        for (int k = 0; k <= K; ++k) {
            sys.coupling.push_back({lvl_I(k), lvl_J(k), C_IJ});
            if (k >= 1) sys.coupling.push_back({lvl_J(k - 1), lvl_I(k), C_JI});
            sys.coupling.push_back({lvl_J(k), lvl_V(k), C_JI});
        }
        solved[s] = [&] {
            auto sol = solve_levels(sys, t_grid);
            std::vector<std::vector<MatC>> v;
            for (auto& lv : sol) v.push_back(std::move(lv));
            return v;
        }();
    }
    for (std::size_t c = 0; c < chains.size(); ++c) {
        const Chain& ch = chains[c];
        const int m = ch.length();
        if (ch.shift <= 1) {
            const auto& sol = solved.at(ch.shift);
            for (std::size_t i = 0; i < nt; ++i) {
                for (int k = 0; k <= K; ++k) {
                    res.iterates[k].I[i].blocks[c] = chi * sol[i][lvl_I(k)];
                    res.iterates[k].J[i].blocks[c] = chi * sol[i][lvl_J(k)];
                    res.remainders[k].V[i].blocks[c] = chi * sol[i][lvl_V(k)];
                }
                res.G_L[i].blocks[c] = chi * sol[i][lvl_G];
            }
        } else {
            // purely microscopic chain: J_0 = e^{tB2} = e^{tB}, all other iterates vanish
            const MatC Bc = chain_matrix(Kind::B, xi, ch.shift, m);
            double t_prev = 0.0;
            MatC E = MatC::Identity(m, m);
            for (std::size_t i = 0; i < nt; ++i) {
                E = expm_pade13((t_grid[i] - t_prev) * Bc).value * E;
                t_prev = t_grid[i];
                res.iterates[0].J[i].blocks[c] = chi * E;
                res.G_L[i].blocks[c] = chi * E;
            }
        }
    }
    for (auto& r : res.remainders) {
        r.Z_grad_e1.clear();
        for (std::size_t i = 0; i < nt; ++i) {
            // grad Z = -(V, sqrt M) i xi / |xi|^2, e1 component
            VecC row = r.V[i].dense().row(0).transpose();
            r.Z_grad_e1.push_back(cxd(0.0, -1.0 / xi) * row);
        }
    }
    return res;
}

std::vector<LowFreqIterate> iterate_low(int k_max, double xi, const std::vector<double>& t_grid, BasisPtr basis,
                                        double R) {
    return solve_low(k_max, xi, t_grid, basis, R).iterates;
}

Remainder remainder_low(int k, double xi, const std::vector<double>& t_grid, BasisPtr basis, double R) {
    return solve_low(k, xi, t_grid, basis, R).remainders.at(k);
}

LadderFit fit_low_ladder(int K, double t, const std::vector<double>& xi_grid, BasisPtr basis, double R) {
    const std::size_t n = xi_grid.size();
    std::vector<std::vector<double>> nI(K + 1, std::vector<double>(n)), nJ = nI, nV = nI;
    parallel_for(n, [&](std::size_t i) {
        LowFreqResult r = solve_low(K, xi_grid[i], {t}, basis, R);
        for (int k = 0; k <= K; ++k) {
            nI[k][i] = r.iterates[k].I[0].norm_xi(xi_grid[i]);
            nJ[k][i] = r.iterates[k].J[0].norm();
            nV[k][i] = r.remainders[k].V[0].norm_xi(xi_grid[i]);
        }
    });
    LadderFit f;
    f.xi = xi_grid;
    std::vector<double> lx;
    for (double x : xi_grid) lx.push_back(std::log(x));
    auto fit = [&](const std::vector<double>& v, double& e, double& r) {
        std::vector<double> ly;
        for (double y : v) ly.push_back(std::log(y));
        LineFit lf = fit_line(lx, ly);
        e = lf.slope;
        r = lf.residual;
    };
    for (int k = 0; k <= K; ++k) {
        double e, r;
        fit(nI[k], e, r);
        f.I_exp.push_back(e);
        f.I_res.push_back(r);
        fit(nJ[k], e, r);
        f.J_exp.push_back(e);
        f.J_res.push_back(r);
        fit(nV[k], e, r);
        f.V_exp.push_back(e);
        f.V_res.push_back(r);
    }
    return f;
}

}  // namespace vpfp
