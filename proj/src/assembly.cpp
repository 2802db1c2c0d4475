#include "vpfp/assembly.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_spline.h>

#include "vpfp/lowfreq.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

ModeGrid make_mode_grid(double xi_min, double split, double xi_max, int n_low, int n_high, int n_tail) {
    if (!(xi_min > 0.0) || !(split > xi_min) || !(xi_max > split) || n_low < 3 || n_high < 1)
        throw UsageError("make_mode_grid: invalid grid parameters");
    ModeGrid g;
    g.xi_max = xi_max;
    g.nodes = linspace(xi_min, split, n_low);
    const double top = std::min(20.0, xi_max);
    for (int i = 1; i <= n_high; ++i) g.nodes.push_back(split + (top - split) * i / n_high);
    if (xi_max > 20.0 && n_tail > 0)
        for (int i = 1; i <= n_tail; ++i) g.nodes.push_back(20.0 + (xi_max - 20.0) * i / n_tail);
    const std::size_t n = g.nodes.size();
    g.weights.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = g.nodes[i + 1] - g.nodes[i];
        g.weights[i] += 0.5 * h;
        g.weights[i + 1] += 0.5 * h;
    }
    return g;
}

namespace {

struct ComplexSpline {
    gsl_spline* re = nullptr;
    gsl_spline* im = nullptr;
    ComplexSpline(const std::vector<double>& k, const std::vector<cxd>& c) {
        std::vector<double> a(k.size()), b(k.size());
        for (std::size_t i = 0; i < k.size(); ++i) {
            a[i] = c[i].real();
            b[i] = c[i].imag();
        }
        re = gsl_spline_alloc(gsl_interp_cspline, k.size());
        im = gsl_spline_alloc(gsl_interp_cspline, k.size());
        gsl_spline_init(re, k.data(), a.data(), k.size());
        gsl_spline_init(im, k.data(), b.data(), k.size());
    }
    ComplexSpline(const ComplexSpline&) = delete;
    ComplexSpline& operator=(const ComplexSpline&) = delete;
    ~ComplexSpline() {
        gsl_spline_free(re);
        gsl_spline_free(im);
    }
    cxd eval(double x, gsl_interp_accel* acc) const {
        return {gsl_spline_eval(re, x, acc), gsl_spline_eval(im, x, acc)};
    }
};

struct GslSilence {
    GslSilence() { gsl_set_error_handler_off(); }
};
const GslSilence gsl_silence;

// Several transforms sharing one k grid: out[c][i] for component c at r[i].
std::vector<std::vector<cxd>> multi_hankel(const std::vector<int>& l, const std::vector<int>& p,
                                           const std::vector<double>& k_in, const std::vector<std::vector<cxd>>& c_in,
                                           const std::vector<double>& r, bool* aliasing) {
    if (k_in.size() < 3) throw UsageError("hankel: need at least 3 grid nodes");
    for (std::size_t i = 1; i < k_in.size(); ++i)
        if (!(k_in[i] > k_in[i - 1]) || !(k_in[0] >= 0.0)) throw UsageError("hankel: grid must be increasing and >= 0");
    for (int pj : p)
        if (pj < 1) throw UsageError("hankel: power p must be >= 1");
    // the integrand k^p c(k) vanishes at k = 0 for every transform used here
    // (|c| grows at most like 1/k); closing the grid there avoids a spurious
    // edge contribution ~ 1/r from the first node
    std::vector<double> k = k_in;
    std::vector<std::vector<cxd>> c = c_in;
    if (k.front() > 0.0) {
        k.insert(k.begin(), 0.0);
        for (auto& cj : c) cj.insert(cj.begin(), 0.0);
    }
    const std::size_t nc = c.size(), nk = k.size();
    int lmax = 0;
    for (int li : l) lmax = std::max(lmax, li);
    // integrands k^p c(k), splined
    std::vector<std::unique_ptr<ComplexSpline>> sp;
    double kcut = k.front(), gmax = 0.0;
    std::vector<std::vector<cxd>> q(nc, std::vector<cxd>(nk));
    for (std::size_t j = 0; j < nc; ++j)
        for (std::size_t i = 0; i < nk; ++i) {
            q[j][i] = k[i] == 0.0 ? cxd(0.0) : std::pow(k[i], p[j]) * c[j][i];
            gmax = std::max(gmax, std::abs(q[j][i]));
        }
    std::size_t last = 1;
    for (std::size_t j = 0; j < nc; ++j)
        for (std::size_t i = 0; i < nk; ++i)
            if (std::abs(q[j][i]) > 1e-17 * gmax) last = std::max(last, i);
    last = std::min(nk - 1, last + 1);
    kcut = k[last];
    for (std::size_t j = 0; j < nc; ++j) sp.push_back(std::make_unique<ComplexSpline>(k, q[j]));
    double hmax = 0.0;
    for (std::size_t i = 1; i <= last; ++i) hmax = std::max(hmax, k[i] - k[i - 1]);
    const double pref = 4.0 * kPi / std::pow(2.0 * kPi, 1.5);
    std::vector<cxd> il(lmax + 1);
    for (int j = 0; j <= lmax; ++j) il[j] = std::pow(kI, j);
    const QuadRule unit = gauss_legendre(8, 0.0, 1.0);
    std::vector<std::vector<cxd>> out(nc, std::vector<cxd>(r.size(), 0.0));
    bool alias = false;
    for (double ri : r)
        if (hmax * ri > 0.25 * kPi) alias = true;
    parallel_for(r.size(), [&](std::size_t ir) {
        const double rr = r[ir];
        gsl_interp_accel* acc = gsl_interp_accel_alloc();
        std::vector<double> jl(lmax + 1);
        std::vector<cxd> sum(nc, 0.0);
        const double wmax = rr > 0.0 ? 0.5 * kPi / rr : kcut;
        for (std::size_t i = 0; i < last; ++i) {
            const double a = k[i], b = k[i + 1];
            const int np = std::max(1, int(std::ceil((b - a) / wmax)));
            const double h = (b - a) / np;
            for (int s = 0; s < np; ++s)
                for (std::size_t g = 0; g < unit.x.size(); ++g) {
                    const double x = a + h * (s + unit.x[g]);
                    const double w = h * unit.w[g];
                    if (rr > 0.0) {
                        gsl_sf_bessel_jl_array(lmax, x * rr, jl.data());
                    } else {
                        std::fill(jl.begin(), jl.end(), 0.0);
                        jl[0] = 1.0;
                    }
                    for (std::size_t j = 0; j < nc; ++j) sum[j] += w * jl[l[j]] * sp[j]->eval(x, acc);
                }
        }
        for (std::size_t j = 0; j < nc; ++j) out[j][ir] = pref * il[l[j]] * sum[j];
        gsl_interp_accel_free(acc);
    });
    if (aliasing) *aliasing = alias;
    return out;
}

}  // namespace

HankelResult hankel_transform(int l, int p, const std::vector<double>& k, const std::vector<cxd>& c,
                              const std::vector<double>& r) {
    if (l < 0) throw UsageError("hankel_transform: l must be >= 0");
    if (c.size() != k.size()) throw UsageError("hankel_transform: size mismatch");
    HankelResult h;
    h.r = r;
    h.value = multi_hankel({l}, {p}, k, {c}, r, &h.aliasing_warning)[0];
    return h;
}

HankelResult radial_reconstruct(const std::vector<double>& k, const std::vector<cxd>& g_hat,
                                const std::vector<double>& x_mag) {
    return hankel_transform(0, 2, k, g_hat, x_mag);
}

VecC velocity_data(const BasisSpec& b, Data d) {
    VecC f = VecC::Zero(b.dimension());
    if (d == Data::Isotropic) {
        f(0) = 1.0;
    } else {
        const double c = 1.0 / std::sqrt(3.0);
        f(b.index_of(2, 0, 0)) = c;
        f(b.index_of(0, 2, 0)) = c;
        f(b.index_of(0, 0, 2)) = c;
    }
    return f;
}

ModeResponse mode_response(double t, Part part, Data data, const AssemblyConfig& cfg, BasisPtr basis,
                           const AxisymmetricBasis& ax) {
    if (!(t >= 0.0)) throw UsageError("mode_response: t must be >= 0");
    ModeResponse m;
    m.t = t;
    m.k = cfg.grid.nodes;
    const std::size_t n = m.k.size();
    m.cart.assign(n, VecC());
    m.sph.assign(n, VecC());
    const VecC f0 = velocity_data(*basis, data);
    parallel_for(n, [&](std::size_t i) {
        const double k = m.k[i];
        const VecC f = std::pow(2.0 * kPi, -1.5) * std::exp(-0.5 * cfg.sigma * cfg.sigma * k * k) * f0;
        VecC u;
        switch (part) {
            case Part::Full: u = semigroup_apply(Kind::B, k, t, *basis, f); break;
            case Part::Low: {
                const double chi = cutoff_chi(k, cfg.R, Cutoff::Low);
                u = chi == 0.0 ? VecC(VecC::Zero(f.size())) : VecC(chi * semigroup_apply(Kind::B, k, t, *basis, f));
                break;
            }
            case Part::High: {
                const double chi = cutoff_chi(k, cfg.R, Cutoff::High);
                u = chi == 0.0 ? VecC(VecC::Zero(f.size())) : VecC(chi * semigroup_apply(Kind::B, k, t, *basis, f));
                break;
            }
            case Part::HighRemainder:
                u = t == 0.0 ? VecC(VecC::Zero(f.size()))
                             : high_apply(cfg.k_remainder, k, {t}, *basis, f, cfg.R)[0][cfg.k_remainder + 1];
                break;
        }
        m.cart[i] = u;
        m.sph[i] = ax.T.cast<cxd>() * u;
    });
    return m;
}

Profiles reconstruct_profiles(const ModeResponse& m, const AxisymmetricBasis& ax, const std::vector<double>& r,
                              double) {
    Profiles p;
    p.t = m.t;
    p.r = r;
    const int R = ax.size();
    std::vector<int> l, pw;
    std::vector<std::vector<cxd>> c;
    for (int j = 0; j < R; ++j) {
        l.push_back(ax.nl[j].second);
        pw.push_back(2);
        std::vector<cxd> cj;
        for (const auto& s : m.sph) cj.push_back(s(j));
        c.push_back(std::move(cj));
    }
    // field: grad Phi has symbol -i xi rho_hat / |xi|^2, an l = 1 transform of -i rho_hat/k
    const int i00 = ax.index(0, 0);
    {
        l.push_back(1);
        pw.push_back(1);
        std::vector<cxd> cf;
        for (const auto& s : m.sph) cf.push_back(cxd(0.0, -1.0) * s(i00));
        c.push_back(std::move(cf));
    }
    auto h = multi_hankel(l, pw, m.k, c, r, &p.aliasing_warning);
    // same transforms on every other node (last node kept)
    std::vector<double> kc;
    std::vector<std::vector<cxd>> cc(c.size());
    for (std::size_t i = 0; i < m.k.size(); ++i)
        if (i % 2 == 0 || i + 1 == m.k.size()) {
            kc.push_back(m.k[i]);
            for (std::size_t j = 0; j < c.size(); ++j) cc[j].push_back(c[j][i]);
        }
    auto hc = multi_hankel(l, pw, kc, cc, r, nullptr);
    const std::size_t nr = r.size();
    for (auto* v : {&p.P0, &p.Pm, &p.P3, &p.full, &p.field, &p.P0_err, &p.Pm_err, &p.P3_err, &p.full_err,
                    &p.field_err})
        v->assign(nr, 0.0);
    const int i01 = ax.index(0, 1);
    for (std::size_t i = 0; i < nr; ++i) {
        double s3 = 0.0, sf = 0.0, e3 = 0.0, ef = 0.0;
        for (int j = 0; j < R; ++j) {
            const double a2 = std::norm(h[j][i]), d2 = std::norm(h[j][i] - hc[j][i]);
            sf += a2;
            ef += d2;
            if (2 * ax.nl[j].first + ax.nl[j].second >= 2) {
                s3 += a2;
                e3 += d2;
            }
        }
        p.P0[i] = std::abs(h[i00][i]);
        p.P0_err[i] = std::abs(h[i00][i] - hc[i00][i]);
        if (i01 >= 0) {
            p.Pm[i] = std::abs(h[i01][i]);
            p.Pm_err[i] = std::abs(h[i01][i] - hc[i01][i]);
        }
        p.P3[i] = std::sqrt(s3);
        p.P3_err[i] = std::sqrt(e3);
        p.full[i] = std::sqrt(sf);
        p.full_err[i] = std::sqrt(ef);
        p.field[i] = std::abs(h[R][i]);
        p.field_err[i] = std::abs(h[R][i] - hc[R][i]);
    }
    return p;
}

Profiles assemble_green(double t, Part part, Data data, const std::vector<double>& r, const AssemblyConfig& cfg) {
    BasisPtr basis = build_basis(cfg.max_degree);
    const AxisymmetricBasis ax = build_axisymmetric(*basis);
    return reconstruct_profiles(mode_response(t, part, data, cfg, basis, ax), ax, r, cfg.sigma);
}

std::vector<double> profile_of(const Profiles& p, const std::string& component) {
    if (component == "P0") return p.P0;
    if (component == "Pm") return p.Pm;
    if (component == "P3") return p.P3;
    if (component == "full") return p.full;
    if (component == "field") return p.field;
    throw UsageError("unknown component '" + component + "'");
}

std::vector<double> error_of(const Profiles& p, const std::string& component) {
    if (component == "P0") return p.P0_err;
    if (component == "Pm") return p.Pm_err;
    if (component == "P3") return p.P3_err;
    if (component == "full") return p.full_err;
    if (component == "field") return p.field_err;
    throw UsageError("unknown component '" + component + "'");
}

DecayFit fit_profile(const Profiles& p, const std::string& component, double x_lo, double x_hi) {
    const auto err = error_of(p, component);
    DecayFit f = fit_decay(component, p.r, profile_of(p, component), x_lo, x_hi, 1e-9, &err);
    f.t = p.t;
    return f;
}

DecayFit fit_decay(const std::string& component, const std::vector<double>& r, const std::vector<double>& profile,
                   double x_lo, double x_hi, double floor_rel, const std::vector<double>* err) {
    if (r.size() != profile.size() || (err && err->size() != r.size()))
        throw UsageError("fit_decay: size mismatch");
    if (!(x_hi > x_lo)) throw UsageError("fit_decay: empty window");
    DecayFit f;
    f.component = component;
    f.x_lo = x_lo;
    f.x_hi = x_hi;
    double pmax = 0.0;
    for (double v : profile) pmax = std::max(pmax, std::abs(v));
    const double floor = floor_rel * pmax;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < x_lo || r[i] > x_hi) continue;
        const double v = std::abs(profile[i]);
        const double e = err ? (*err)[i] : 0.0;
        if (!(v > floor) || !(v > e)) {
            f.super_algebraic = true;
            break;  // keep the leading part above the floor
        }
        lx.push_back(0.5 * std::log1p(r[i] * r[i]));
        ly.push_back(std::log(v));
    }
    f.points = int(lx.size());
    if (lx.size() >= 3) {
        LineFit lf = fit_line(lx, ly);
        f.exponent_x = -lf.slope;
        f.residual = lf.residual;
    } else {
        f.exponent_x = f.super_algebraic ? std::numeric_limits<double>::infinity()
                                         : std::numeric_limits<double>::quiet_NaN();
    }
    return f;
}

DecayFit fit_rate(const std::string& component, const std::vector<double>& t, const std::vector<double>& value) {
    if (t.size() != value.size() || t.size() < 2) throw UsageError("fit_rate: need at least two samples");
    DecayFit f;
    f.component = component;
    f.t = t.front();
    std::vector<double> ly;
    for (double v : value) ly.push_back(std::log(std::abs(v)));
    LineFit lf = fit_line(t, ly);
    f.rate_t = -lf.slope;
    f.residual = lf.residual;
    f.points = int(t.size());
    return f;
}

}  // namespace vpfp
