#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vpfp/assembly.hpp"
#include "vpfp/kernel.hpp"
#include "vpfp/lowfreq.hpp"
#include "vpfp/modes.hpp"
#include "vpfp/nonlinear.hpp"

namespace py = pybind11;
using namespace vpfp;

namespace {

Part parse_part(const std::string& s) {
    if (s == "full") return Part::Full;
    if (s == "low") return Part::Low;
    if (s == "high") return Part::High;
    if (s == "high-remainder") return Part::HighRemainder;
    throw UsageError("unknown part '" + s + "'");
}

Data parse_data(const std::string& s) {
    if (s == "isotropic") return Data::Isotropic;
    if (s == "microscopic") return Data::Microscopic;
    throw UsageError("unknown data '" + s + "'");
}

py::dict fit_dict(const DecayFit& f) {
    py::dict d;
    d["component"] = f.component;
    d["t"] = f.t;
    d["exponent_x"] = f.exponent_x;
    d["rate_t"] = f.rate_t;
    d["window"] = py::make_tuple(f.x_lo, f.x_hi);
    d["residual"] = f.residual;
    d["super_algebraic"] = f.super_algebraic;
    d["points"] = f.points;
    return d;
}

}  // namespace

PYBIND11_MODULE(_vpfp, m) {
    m.doc() = "Linearized and nonlinear Vlasov-Poisson-Fokker-Planck toolkit";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("basis_dimension", [](int n) { return build_basis(n)->dimension(); }, py::arg("max_degree"));
    m.def("basis_manifest_hash", [](int n) { return build_basis(n)->manifest_hash(); }, py::arg("max_degree"));

    m.def("operator_matrix",
          [](const std::string& kind, double xi, int n) { return assemble(parse_kind(kind), xi, build_basis(n)).matrix; },
          py::arg("kind"), py::arg("xi"), py::arg("max_degree") = 16,
          "Truncated matrix of B, B1, B2 or A at xi e1.");
    m.def("semigroup",
          [](const std::string& kind, double xi, double t, int n) {
              return semigroup_blocks(parse_kind(kind), xi, t, build_basis(n)).dense();
          },
          py::arg("kind"), py::arg("xi"), py::arg("t"), py::arg("max_degree") = 16,
          "Padded semigroup e^{tK(xi)} restricted to the basis.");
    m.def("spectrum",
          [](const std::string& kind, double xi, int n) { return spectrum(assemble(parse_kind(kind), xi, build_basis(n))); },
          py::arg("kind"), py::arg("xi"), py::arg("max_degree") = 16);
    m.def("spectral_gap",
          [](const std::vector<double>& xi, int n, double threshold, double r0_cap) {
              const GapScan g = spectral_gap_scan(build_basis(n), xi, threshold, r0_cap);
              py::dict d;
              d["xi"] = g.xi;
              d["max_re"] = g.max_re;
              d["r0_hat"] = g.r0_hat;
              d["beta0_hat"] = g.beta0_hat;
              d["beta1_hat"] = g.beta1_hat;
              d["eta0_hat"] = g.eta0_hat;
              return d;
          },
          py::arg("xi"), py::arg("max_degree") = 16, py::arg("threshold") = -0.45, py::arg("r0_cap") = 1.0);

    m.def("variance_D", &variance_D, py::arg("t"));
    m.def("eval_G1", [](double t, const Vec3& x, const Vec3& v, const Vec3& y, const Vec3& u) {
              return eval_G1(t, x, v, y, u).value;
          },
          py::arg("t"), py::arg("x"), py::arg("v"), py::arg("y"), py::arg("u"));
    m.def("eval_G1_hat", &eval_G1_hat, py::arg("t"), py::arg("xi"), py::arg("v"), py::arg("u"));
    m.def("kernel_normalization", [] {
        const auto& k = kernel_normalization();
        return py::make_tuple(k.g1, k.g1_hat);
    });
    m.def("cutoff_chi",
          [](double xi, double R, const std::string& which) {
              if (which != "low" && which != "high") throw UsageError("which must be 'low' or 'high'");
              return cutoff_chi(xi, R, which == "low" ? Cutoff::Low : Cutoff::High);
          },
          py::arg("xi"), py::arg("R"), py::arg("which"));

    m.def("radial_reconstruct",
          [](const std::vector<double>& k, const std::vector<cxd>& g, const std::vector<double>& x) {
              return radial_reconstruct(k, g, x).value;
          },
          py::arg("k"), py::arg("g_hat"), py::arg("x"));
    m.def("fit_decay",
          [](const std::vector<double>& r, const std::vector<double>& p, double lo, double hi) {
              return fit_dict(fit_decay("profile", r, p, lo, hi));
          },
          py::arg("r"), py::arg("profile"), py::arg("x_lo"), py::arg("x_hi"));
    m.def("assemble_green",
          [](double t, const std::vector<double>& r, const std::string& part, const std::string& data, int n) {
              AssemblyConfig cfg;
              cfg.max_degree = n;
              const Profiles p = assemble_green(t, parse_part(part), parse_data(data), r, cfg);
              py::dict d;
              d["r"] = p.r;
              for (const char* c : {"P0", "Pm", "P3", "full", "field"}) {
                  d[c] = profile_of(p, c);
                  d[(std::string(c) + "_err").c_str()] = error_of(p, c);
              }
              d["aliasing_warning"] = p.aliasing_warning;
              return d;
          },
          py::arg("t"), py::arg("r"), py::arg("part") = "full", py::arg("data") = "isotropic",
          py::arg("max_degree") = 16, "Radial profiles of the mollified Green's function.");

    m.def("simulate",
          [](int n, double delta0, bool neutral, bool linear_only, double t_end, double dt) {
              SimConfig c;
              c.max_degree = n;
              c.delta0 = delta0;
              c.neutral = neutral;
              c.linear_only = linear_only;
              c.t_end = t_end;
              c.dt = dt;
              RadialSolver s(c);
              const Trajectory tr = evolve(s, s.initial_state(), c.t_end, c.dt, c.snapshot_every);
              const DecayReport rep = decay_report(s, tr);
              py::dict d;
              std::vector<double> ts;
              for (const auto& snap : tr.snapshots) ts.push_back(snap.t);
              d["t"] = ts;
              d["mass"] = tr.mass;
              d["energy"] = tr.energy;
              py::list fits;
              for (const auto& f : rep.fits) fits.append(fit_dict(f));
              d["fits"] = fits;
              d["weighted_rate"] = rep.weighted_rate;
              d["gradv_slope"] = rep.gradv_slope;
              d["mass_drift_rate"] = rep.mass_drift_rate;
              return d;
          },
          py::arg("max_degree") = 8, py::arg("delta0") = 1e-3, py::arg("neutral") = false,
          py::arg("linear_only") = false, py::arg("t_end") = 10.0, py::arg("dt") = 0.05);
}
