// vpfp: spectrum | kernel-probe | lowfreq | highfreq | assemble | simulate | validate
//
// Every run writes its outputs plus manifest.json into --output-dir. Parameters
// come from the defaults, then --config (JSON), then explicit flags.
// Exit codes: 0 pass, 1 criterion failure, 2 usage or configuration error.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "suites.hpp"
#include "vpfp/assembly.hpp"
#include "vpfp/highfreq.hpp"
#include "vpfp/kernel.hpp"
#include "vpfp/lowfreq.hpp"
#include "vpfp/modes.hpp"
#include "vpfp/nonlinear.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vpfp;

namespace {

// One command's parameter table: name -> default, with the CLI option that may override it.
class Params {
public:
    void add(CLI::App* app, const std::string& name, json def, const std::string& help) {
        auto p = std::make_unique<Param>();
        p->def = std::move(def);
        if (p->def.is_boolean())
            p->opt = app->add_flag("--" + name, p->flag, help);
        else
            p->opt = app->add_option("--" + name, p->raw, help + " [" + p->def.dump() + "]");
        order_.push_back(name);
        table_[name] = std::move(p);
    }

    json resolve(const json& file) const {
        json cfg = json::object();
        for (const auto& name : order_) {
            const Param& p = *table_.at(name);
            if (p.opt->count() > 0)
                cfg[name] = p.def.is_boolean() ? json(p.flag) : convert(name, p.def, p.raw);
            else if (file.contains(name))
                cfg[name] = file.at(name);
            else
                cfg[name] = p.def;
        }
        for (const auto& [k, v] : file.items())
            if (!table_.count(k)) throw UsageError("unknown config key '" + k + "'");
        return cfg;
    }

private:
    struct Param {
        json def;
        std::string raw;
        bool flag = false;
        CLI::Option* opt = nullptr;
    };
    static json convert(const std::string& name, const json& def, const std::string& raw) {
        try {
            if (def.is_number_integer()) return std::stoll(raw);
            if (def.is_number()) return std::stod(raw);
            if (def.is_array()) return json::parse(raw);
        } catch (const std::exception&) {
            throw UsageError("invalid value '" + raw + "' for --" + name);
        }
        return raw;
    }
    std::vector<std::string> order_;
    std::map<std::string, std::unique_ptr<Param>> table_;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    try {
        json j = json::parse(in);
        if (!j.is_object()) throw UsageError("config file must hold a JSON object: " + path);
        return j;
    } catch (const json::parse_error& e) {
        throw UsageError("cannot parse config file " + path + ": " + e.what());
    }
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string e17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

// Collects output files and writes the manifest at the end of a run.
class Run {
public:
    Run(std::string command, json cfg, std::string out_dir)
        : command_(std::move(command)), cfg_(std::move(cfg)), dir_(std::move(out_dir)),
          t0_(std::chrono::steady_clock::now()) {
        fs::create_directories(dir_);
    }

    std::ofstream open(const std::string& name) {
        outputs_.push_back(name);
        std::ofstream f(fs::path(dir_) / name);
        if (!f) throw UsageError("cannot write " + (fs::path(dir_) / name).string());
        return f;
    }
    void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << "\n"; }

    void finish(int basis_degree, int exit_code) {
        const auto& kn = kernel_normalization();
        json m = {{"command", command_},
                  {"config", cfg_},
                  {"config_hash", hex(fnv1a(cfg_.dump()))},
                  {"kernel_normalization", {{"g1", kn.g1}, {"g1_hat", kn.g1_hat}}},
                  {"outputs", outputs_},
                  {"exit_code", exit_code},
                  {"workers", worker_count()},
                  {"elapsed_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count()},
                  {"timestamp", std::time(nullptr)}};
        if (basis_degree >= 0) {
            m["basis_degree"] = basis_degree;
            m["basis_manifest_hash"] = build_basis(basis_degree)->manifest_hash();
        }
        for (const auto& [k, v] : extra_.items()) m[k] = v;
        std::ofstream f(fs::path(dir_) / "manifest.json");
        f << m.dump(2) << "\n";
    }
    json& extra() { return extra_; }
    const std::string& dir() const { return dir_; }

private:
    std::string command_;
    json cfg_;
    std::string dir_;
    std::chrono::steady_clock::time_point t0_;
    std::vector<std::string> outputs_;
    json extra_ = json::object();
};

template <class T>
T get(const json& cfg, const char* key) {
    return cfg.at(key).get<T>();
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw UsageError(msg);
}

// ---- spectrum ----
int cmd_spectrum(const json& cfg, Run& run) {
    const int N = get<int>(cfg, "basis-degree");
    const double xmin = get<double>(cfg, "xi-min"), xmax = get<double>(cfg, "xi-max");
    const int n = get<int>(cfg, "n-xi"), n_eig = get<int>(cfg, "n-eig");
    require(xmax > 0 && xmin > 0 && xmax > xmin, "--xi-min and --xi-max must satisfy 0 < xi-min < xi-max");
    require(n >= 2, "--n-xi must be >= 2");
    require(N >= 1, "--basis-degree must be >= 1");
    auto basis = build_basis(N);
    const auto xi = logspace(xmin, xmax, n);
    std::vector<std::vector<cxd>> eig(xi.size());
    parallel_for(xi.size(), [&](std::size_t i) { eig[i] = spectrum(assemble(Kind::B, xi[i], basis)); });
    const GapScan g = spectral_gap_scan(basis, xi, get<double>(cfg, "threshold"), get<double>(cfg, "r0-cap"));
    auto csv = run.open("spectrum.csv");
    csv << "xi,rank,re,im\n";
    for (std::size_t i = 0; i < xi.size(); ++i)
        for (int r = 0; r < std::min<int>(n_eig, int(eig[i].size())); ++r)
            csv << e17(xi[i]) << "," << r << "," << e17(eig[i][r].real()) << "," << e17(eig[i][r].imag()) << "\n";
    auto gap = run.open("gap.csv");
    gap << "xi,max_re\n";
    for (std::size_t i = 0; i < g.xi.size(); ++i) gap << e17(g.xi[i]) << "," << e17(g.max_re[i]) << "\n";
    const bool ok = g.r0_hat > 0.0 && g.beta0_hat > 0.0;
    run.write_json("report.json", {{"r0_hat", g.r0_hat},
                                   {"beta0_hat", g.beta0_hat},
                                   {"beta1_hat", g.beta1_hat},
                                   {"eta0_hat", g.eta0_hat},
                                   {"threshold", g.threshold},
                                   {"r0_cap", g.r0_cap},
                                   {"gap_criteria_hold", ok}});
    std::printf("N=%d r0_hat=%.6e beta0_hat=%.6e eta0_hat=%.6e gap %s\n", N, g.r0_hat, g.beta0_hat, g.eta0_hat,
                ok ? "holds" : "FAILS");
    return ok ? 0 : 1;
}

// ---- kernel-probe ----
int cmd_kernel_probe(const json& cfg, Run& run) {
    const auto ks = get<std::vector<int>>(cfg, "k");
    const auto ts = logspace(get<double>(cfg, "t-min"), get<double>(cfg, "t-max"), get<int>(cfg, "n-t"));
    const auto tl = linspace(get<double>(cfg, "t-large-min"), get<double>(cfg, "t-large-max"), get<int>(cfg, "n-t"));
    for (int k : ks) require(k >= 0, "--k entries must be >= 0");
    auto csv = run.open("probe.csv");
    csv << "k,t,sup_norm,exact\n";
    json fits = json::array();
    for (int k : ks) {
        const ProbeFit f = semigroup_scaling_probe(k, ts);
        const ProbeFit r = semigroup_rate_probe(k, tl);
        for (std::size_t i = 0; i < ts.size(); ++i)
            csv << k << "," << e17(ts[i]) << "," << e17(f.norm[i]) << "," << e17(scaled_semigroup_norm_exact(k, ts[i]))
                << "\n";
        for (std::size_t i = 0; i < tl.size(); ++i)
            csv << k << "," << e17(tl[i]) << "," << e17(r.norm[i]) << "," << e17(scaled_semigroup_norm_exact(k, tl[i]))
                << "\n";
        fits.push_back({{"k", k},
                        {"small_t_exponent", f.exponent},
                        {"small_t_residual", f.residual},
                        {"target", 1.5 * k},
                        {"large_t_rate", r.exponent},
                        {"large_t_residual", r.residual}});
        std::printf("k=%d small-t exponent %.4f (3k/2 = %.2f), large-t rate %.4f\n", k, f.exponent, 1.5 * k,
                    r.exponent);
    }
    const int N = get<int>(cfg, "basis-degree");
    auto basis = build_basis(N);
    json ident = json::array();
    for (double t : {0.1, 0.5, 2.0})
        for (double xi : {0.0, 1.0, 5.0}) {
            const double err =
                (hermite_matrix_of_G1_hat(t, xi, *basis) - semigroup_blocks(Kind::A, xi, t, basis).dense())
                    .cwiseAbs()
                    .maxCoeff();
            ident.push_back({{"t", t}, {"xi", xi}, {"max_entry_error", err}});
        }
    run.write_json("report.json", {{"fits", fits}, {"kernel_identity", ident}});
    return 0;
}

// ---- lowfreq ----
int cmd_lowfreq(const json& cfg, Run& run) {
    const int K = get<int>(cfg, "k-max");
    require(K >= 0, "--k-max must be >= 0");
    const auto xi = logspace(get<double>(cfg, "xi-min"), get<double>(cfg, "xi-max"), get<int>(cfg, "n-xi"));
    const double t = get<double>(cfg, "t"), R = get<double>(cfg, "R");
    require(t > 0 && R > 0, "--t and --R must be positive");
    auto basis = build_basis(get<int>(cfg, "basis-degree"));
    std::vector<LowFreqResult> res(xi.size());
    parallel_for(xi.size(), [&](std::size_t i) { res[i] = solve_low(K, xi[i], {t}, basis, R); });
    auto csv = run.open("ladder.csv");
    csv << "xi,k,I_norm_xi,J_norm,V_norm_xi\n";
    for (std::size_t i = 0; i < xi.size(); ++i)
        for (int k = 0; k <= K; ++k)
            csv << e17(xi[i]) << "," << k << "," << e17(res[i].iterates[k].I[0].norm_xi(xi[i])) << ","
                << e17(res[i].iterates[k].J[0].norm()) << "," << e17(res[i].remainders[k].V[0].norm_xi(xi[i]))
                << "\n";
    const LadderFit f = fit_low_ladder(K, t, xi, basis, R);
    json fits = json::array();
    for (int k = 0; k <= K; ++k) {
        fits.push_back({{"k", k},
                        {"I_exponent", f.I_exp[k]},
                        {"J_exponent", f.J_exp[k]},
                        {"V_exponent", f.V_exp[k]},
                        {"I_residual", f.I_res[k]},
                        {"J_residual", f.J_res[k]},
                        {"V_residual", f.V_res[k]}});
        std::printf("k=%d  I %.4f  J %.4f  V %.4f\n", k, f.I_exp[k], f.J_exp[k], f.V_exp[k]);
    }
    run.write_json("report.json", {{"t", t}, {"fits", fits}});
    return 0;
}

// ---- highfreq ----
int cmd_highfreq(const json& cfg, Run& run) {
    const int J = get<int>(cfg, "j-max"), K = get<int>(cfg, "k-max");
    require(J >= 0 && K >= 0, "--j-max and --k-max must be >= 0");
    const auto ts = logspace(get<double>(cfg, "t-min"), get<double>(cfg, "t-max"), get<int>(cfg, "n-t"));
    const double xi_min = get<double>(cfg, "xi-min");
    auto csv = run.open("probe.csv");
    csv << "j,k,t,sup_norm\n";
    json fits = json::array();
    for (int j = 0; j <= J; ++j)
        for (int k = 0; k <= K; ++k) {
            const ProbeFit f = high_scaling_probe(j, k, ts, xi_min);
            for (std::size_t i = 0; i < ts.size(); ++i)
                csv << j << "," << k << "," << e17(ts[i]) << "," << e17(f.norm[i]) << "\n";
            fits.push_back({{"j", j}, {"k", k}, {"exponent", f.exponent}, {"target", j - 1.5 * k}, {"residual", f.residual}});
            std::printf("j=%d k=%d exponent %.4f (j - 3k/2 = %.2f)\n", j, k, f.exponent, j - 1.5 * k);
        }
    const int rk = get<int>(cfg, "remainder-k");
    const XiFit r = fit_high_remainder(rk, get<double>(cfg, "remainder-t"),
                                       logspace(1.0, get<double>(cfg, "remainder-xi-max"), get<int>(cfg, "n-xi")),
                                       build_basis(get<int>(cfg, "basis-degree")), get<double>(cfg, "R"));
    auto rc = run.open("remainder.csv");
    rc << "xi,norm_xi\n";
    for (std::size_t i = 0; i < r.xi.size(); ++i) rc << e17(r.xi[i]) << "," << e17(r.norm[i]) << "\n";
    std::printf("R_%d decay exponent in (1+|xi|): %.4f\n", rk, r.exponent);
    run.write_json("report.json",
                   {{"fits", fits}, {"remainder", {{"k", rk}, {"exponent", r.exponent}, {"residual", r.residual}}}});
    return 0;
}

// ---- assemble ----
int cmd_assemble(const json& cfg, Run& run) {
    AssemblyConfig ac;
    ac.max_degree = get<int>(cfg, "basis-degree");
    ac.R = get<double>(cfg, "R");
    ac.sigma = get<double>(cfg, "sigma");
    ac.k_remainder = get<int>(cfg, "k-remainder");
    ac.grid = make_mode_grid(get<double>(cfg, "xi-min"), 2.0, get<double>(cfg, "xi-max"), get<int>(cfg, "n-low"),
                             get<int>(cfg, "n-high"), get<int>(cfg, "n-tail"));
    const std::string part_s = get<std::string>(cfg, "part"), data_s = get<std::string>(cfg, "data");
    const std::map<std::string, Part> parts = {
        {"full", Part::Full}, {"low", Part::Low}, {"high", Part::High}, {"high-remainder", Part::HighRemainder}};
    const std::map<std::string, Data> datas = {{"isotropic", Data::Isotropic}, {"microscopic", Data::Microscopic}};
    require(parts.count(part_s), "unknown --part '" + part_s + "'");
    require(datas.count(data_s), "unknown --data '" + data_s + "'");
    const double t = get<double>(cfg, "t");
    require(t > 0, "--t must be positive");
    const auto r = linspace(get<double>(cfg, "r-min"), get<double>(cfg, "r-max"), get<int>(cfg, "n-r"));
    const Profiles p = assemble_green(t, parts.at(part_s), datas.at(data_s), r, ac);
    auto csv = run.open("profiles.csv");
    csv << "t,r,component,value,error_estimate\n";
    for (const char* c : {"P0", "Pm", "P3", "full", "field"}) {
        const auto v = profile_of(p, c), e = error_of(p, c);
        for (std::size_t i = 0; i < r.size(); ++i)
            csv << e17(t) << "," << e17(r[i]) << "," << c << "," << e17(v[i]) << "," << e17(e[i]) << "\n";
    }
    json fits = json::array();
    for (const char* c : {"P0", "Pm", "P3", "field"}) {
        const DecayFit f = fit_profile(p, c, get<double>(cfg, "x-lo"), get<double>(cfg, "x-hi"));
        fits.push_back(suites::fit_to_json(f));
        std::printf("%-5s exponent %8.4f residual %.3e points %d%s\n", c, f.exponent_x, f.residual, f.points,
                    f.super_algebraic ? " (reaches the error estimate inside the window)" : "");
    }
    run.write_json("decay.json", {{"fits", fits}, {"aliasing_warning", p.aliasing_warning}});
    if (p.aliasing_warning) std::fprintf(stderr, "warning: mode grid spacing coarse for the largest r\n");
    return 0;
}

// ---- simulate ----
SimConfig sim_config(const json& cfg) {
    SimConfig c;
    c.max_degree = get<int>(cfg, "basis-degree");
    c.radius = get<double>(cfg, "radius");
    c.k_max = get<double>(cfg, "k-max");
    c.delta0 = get<double>(cfg, "delta0");
    c.n_decay = get<double>(cfg, "n-decay");
    c.neutral = get<bool>(cfg, "neutral");
    c.linear_only = get<bool>(cfg, "linear-only");
    c.dt = get<double>(cfg, "dt");
    c.t_end = get<double>(cfg, "t-end");
    c.snapshot_every = get<double>(cfg, "snapshot-every");
    c.fit_x_lo = get<double>(cfg, "x-lo");
    c.fit_x_hi = get<double>(cfg, "x-hi");
    c.fit_t = get<double>(cfg, "fit-t");
    c.rate_t_lo = get<double>(cfg, "rate-t-lo");
    c.seed = get<std::uint64_t>(cfg, "seed");
    require(c.dt > 0 && c.t_end > 0 && c.snapshot_every > 0, "--dt, --t-end and --snapshot-every must be positive");
    require(c.delta0 >= 0, "--delta0 must be >= 0");
    return c;
}

// Linear runs: a few k rows of the final state against the truncated e^{tB(k)}
// of the mode operators (same Galerkin space as the solver).
json linear_oracle(const RadialSolver& s, const PhaseState& init, const PhaseState& last) {
    const auto& ax = s.axis();
    json rows = json::array();
    const auto& k = s.grid().k;
    for (std::size_t j : {std::size_t(1), k.size() / 20, k.size() / 5}) {
        if (j == 0 || j >= k.size()) continue;
        const VecC cart = ax.T.transpose().cast<cxd>() * init.coeffs.row(j).transpose();
        const VecC ev = semigroup(assemble(Kind::B, k[j], s.basis()), last.t).result * cart;
        const VecC back = ax.T.cast<cxd>() * ev;
        const double err = (back - last.coeffs.row(j).transpose()).norm();
        const double scale = std::max(back.norm(), 1e-300);
        rows.push_back({{"k", k[j]}, {"abs_error", err}, {"rel_error", err / scale}});
    }
    return rows;
}

int cmd_simulate(const json& cfg, Run& run) {
    const SimConfig c = sim_config(cfg);
    RadialSolver solver(c);
    const PhaseState init = solver.initial_state();
    const Trajectory tr = evolve(solver, init, c.t_end, c.dt, c.snapshot_every);
    auto tc = run.open("trajectory.csv");
    tc << "t,mass,energy\n";
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i)
        tc << e17(tr.snapshots[i].t) << "," << e17(tr.mass[i]) << "," << e17(tr.energy[i]) << "\n";
    auto pc = run.open("profiles.csv");
    pc << "t,r,component,value\n";
    for (const auto& s : tr.snapshots) {
        const SpaceProfiles p = space_profiles(solver, s);
        const std::pair<const char*, const std::vector<double>*> comps[] = {
            {"P0", &p.P0}, {"Pm", &p.Pm}, {"P3", &p.P3}, {"field", &p.field}, {"gradv", &p.gradv}};
        for (const auto& [name, v] : comps)
            for (std::size_t i = 0; i < p.r.size(); ++i)
                pc << e17(s.t) << "," << e17(p.r[i]) << "," << name << "," << e17((*v)[i]) << "\n";
    }
    const DecayReport rep = decay_report(solver, tr);
    json fits = json::array();
    for (const auto& f : rep.fits) fits.push_back(suites::fit_to_json(f));
    json out = {{"fits", fits},
                {"weighted_rate", std::isfinite(rep.weighted_rate) ? json(rep.weighted_rate) : json(nullptr)},
                {"gradv_slope", rep.gradv_slope},
                {"mass_drift_rate", rep.mass_drift_rate},
                {"channel_targets", channel_targets(c.neutral)}};
    if (c.linear_only) out["linear_oracle"] = linear_oracle(solver, init, tr.snapshots.back());
    run.write_json("decay.json", out);
    std::printf("mass drift rate %.3e, weighted rate %.4f, grad_v slope %.4f\n", rep.mass_drift_rate,
                rep.weighted_rate, rep.gradv_slope);
    for (const auto& f : rep.fits)
        if (f.exponent_x != 0.0) std::printf("  %-9s |x|-exponent %.4f at t=%.2f\n", f.component.c_str(), f.exponent_x, f.t);
    return 0;
}

// ---- validate ----
int cmd_validate(const json& cfg, Run& run) {
    suites::Options opt;
    opt.quick = get<bool>(cfg, "quick");
    opt.seed = get<std::uint64_t>(cfg, "seed");
    const auto ids = suites::criteria_of(get<std::string>(cfg, "suite"));
    json verdicts = json::array(), timing = json::object();
    int failed = 0;
    for (int id : ids) {
        const suites::Verdict v = suites::run_criterion(id, opt);
        std::printf("%s\n", suites::format_line(v).c_str());
        std::fflush(stdout);
        verdicts.push_back(suites::to_json(v));
        timing[std::to_string(id)] = v.seconds;
        failed += !v.pass;
    }
    run.write_json("verdict.json", {{"suite", get<std::string>(cfg, "suite")},
                                    {"mode", opt.quick ? "smoke" : "full"},
                                    {"criteria", verdicts},
                                    {"failed", failed}});
    run.extra()["criterion_seconds"] = timing;
    std::printf("%zu criteria, %d failed%s\n", ids.size(), failed, opt.quick ? " (smoke)" : "");
    return failed ? 1 : 0;
}

struct Command {
    CLI::App* app = nullptr;
    Params params;
    std::function<int(const json&, Run&)> fn;
    std::string config_path, out_dir;
    int basis_key = 1;  // whether "basis-degree" names the basis of the run
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linearized and nonlinear Vlasov-Poisson-Fokker-Planck toolkit"};
    app.require_subcommand(1);
    std::map<std::string, std::unique_ptr<Command>> cmds;

    auto make = [&](const std::string& name, const std::string& help, std::function<int(const json&, Run&)> fn) {
        auto c = std::make_unique<Command>();
        c->app = app.add_subcommand(name, help);
        c->fn = std::move(fn);
        c->app->add_option("--config", c->config_path, "JSON config file");
        c->app->add_option("--output-dir", c->out_dir, "output directory [out/" + name + "]");
        c->params.add(c->app, "seed", 1, "seed for randomized sampling");
        Command* raw = c.get();
        cmds[name] = std::move(c);
        return raw;
    };

    auto* sp = make("spectrum", "eigenvalues of B(xi) over a |xi| grid and the spectral gap", cmd_spectrum);
    sp->params.add(sp->app, "basis-degree", 16, "Hermite degree N");
    sp->params.add(sp->app, "xi-min", 1e-3, "smallest |xi|");
    sp->params.add(sp->app, "xi-max", 60.0, "largest |xi|");
    sp->params.add(sp->app, "n-xi", 120, "grid size");
    sp->params.add(sp->app, "n-eig", 8, "eigenvalues per node in spectrum.csv");
    sp->params.add(sp->app, "threshold", -0.45, "low-frequency gap threshold");
    sp->params.add(sp->app, "r0-cap", 1.0, "cap for r0_hat");

    auto* kp = make("kernel-probe", "small-t scaling and large-t rate of |xi|^k e^{tA}", cmd_kernel_probe);
    kp->params.add(kp->app, "k", json::array({0, 1, 2}), "powers of |xi| (JSON list)");
    kp->params.add(kp->app, "t-min", 1e-2, "smallest t");
    kp->params.add(kp->app, "t-max", 1e-1, "largest small t");
    kp->params.add(kp->app, "t-large-min", 4.0, "start of the large-t window");
    kp->params.add(kp->app, "t-large-max", 12.0, "end of the large-t window");
    kp->params.add(kp->app, "n-t", 5, "points per window");
    kp->params.add(kp->app, "basis-degree", 12, "degree for the kernel identity check");

    auto* lf = make("lowfreq", "low-frequency iterates I_k, J_k and remainders V_k", cmd_lowfreq);
    lf->params.add(lf->app, "basis-degree", 16, "Hermite degree N");
    lf->params.add(lf->app, "k-max", 3, "largest iterate");
    lf->params.add(lf->app, "t", 1.0, "time");
    lf->params.add(lf->app, "xi-min", 1e-2, "smallest |xi|");
    lf->params.add(lf->app, "xi-max", 1e-1, "largest |xi|");
    lf->params.add(lf->app, "n-xi", 8, "grid size");
    lf->params.add(lf->app, "R", 0.5, "cutoff radius");

    auto* hf = make("highfreq", "high-frequency iterates I_j and the remainder G_H - W_k", cmd_highfreq);
    hf->params.add(hf->app, "basis-degree", 16, "Hermite degree N for the remainder");
    hf->params.add(hf->app, "j-max", 3, "largest iterate");
    hf->params.add(hf->app, "k-max", 2, "largest power of |xi|");
    hf->params.add(hf->app, "t-min", 2e-2, "smallest t");
    hf->params.add(hf->app, "t-max", 1e-1, "largest t");
    hf->params.add(hf->app, "n-t", 4, "points in t");
    hf->params.add(hf->app, "xi-min", 0.5, "lower end of the |xi| sup");
    hf->params.add(hf->app, "remainder-k", 7, "order k of G_H - W_k");
    hf->params.add(hf->app, "remainder-t", 1.0, "time of the remainder fit");
    hf->params.add(hf->app, "remainder-xi-max", 10.0, "largest |xi| of the remainder fit");
    hf->params.add(hf->app, "n-xi", 8, "points in |xi|");
    hf->params.add(hf->app, "R", 0.5, "cutoff radius");

    auto* as = make("assemble", "Green's function profiles in x by mode assembly", cmd_assemble);
    as->params.add(as->app, "basis-degree", 16, "Hermite degree N");
    as->params.add(as->app, "t", 2.0, "time");
    as->params.add(as->app, "part", "full", "full | low | high | high-remainder");
    as->params.add(as->app, "data", "isotropic", "isotropic | microscopic");
    as->params.add(as->app, "R", 0.5, "cutoff radius");
    as->params.add(as->app, "sigma", 0.1, "mollifier width");
    as->params.add(as->app, "k-remainder", 7, "order of W_k for high-remainder");
    as->params.add(as->app, "xi-min", 1e-3, "smallest grid |xi|");
    as->params.add(as->app, "xi-max", 60.0, "largest grid |xi|");
    as->params.add(as->app, "n-low", 120, "nodes on [xi-min, 2]");
    as->params.add(as->app, "n-high", 200, "nodes on (2, 20]");
    as->params.add(as->app, "n-tail", 60, "nodes on (20, xi-max]");
    as->params.add(as->app, "r-min", 1.0, "smallest |x|");
    as->params.add(as->app, "r-max", 60.0, "largest |x|");
    as->params.add(as->app, "n-r", 60, "points in |x|");
    as->params.add(as->app, "x-lo", 5.0, "fit window start");
    as->params.add(as->app, "x-hi", 50.0, "fit window end");

    auto* sm = make("simulate", "nonlinear radial run with decay report", cmd_simulate);
    const SimConfig d;
    sm->params.add(sm->app, "basis-degree", d.max_degree, "Hermite degree N");
    sm->params.add(sm->app, "radius", d.radius, "domain radius");
    sm->params.add(sm->app, "k-max", d.k_max, "largest |k|");
    sm->params.add(sm->app, "delta0", d.delta0, "data amplitude");
    sm->params.add(sm->app, "n-decay", d.n_decay, "spatial decay (1+|x|^2)^{-n}");
    sm->params.add(sm->app, "neutral", false, "zero total charge");
    sm->params.add(sm->app, "linear-only", false, "drop the nonlinear term and compare with e^{tB}");
    sm->params.add(sm->app, "dt", d.dt, "step");
    sm->params.add(sm->app, "t-end", d.t_end, "final time");
    sm->params.add(sm->app, "snapshot-every", d.snapshot_every, "snapshot interval");
    sm->params.add(sm->app, "x-lo", d.fit_x_lo, "fit window start");
    sm->params.add(sm->app, "x-hi", d.fit_x_hi, "fit window end");
    sm->params.add(sm->app, "fit-t", d.fit_t, "time of the spatial fits");
    sm->params.add(sm->app, "rate-t-lo", d.rate_t_lo, "start of the rate window");

    auto* va = make("validate", "acceptance criteria", cmd_validate);
    va->params.add(va->app, "suite", "all", "kernel | lowfreq | highfreq | assembly | nonlinear | all");
    va->params.add(va->app, "quick", false, "reduced grids (smoke)");
    va->basis_key = 0;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (auto& [name, c] : cmds) {
        if (!c->app->parsed()) continue;
        try {
            const json cfg = c->params.resolve(load_config(c->config_path));
            Run run(name, cfg, c->out_dir.empty() ? "out/" + name : c->out_dir);
            const int code = c->fn(cfg, run);
            run.finish(c->basis_key && cfg.contains("basis-degree") ? cfg.at("basis-degree").get<int>() : -1, code);
            return code;
        } catch (const UsageError& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        } catch (const json::exception& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        } catch (const NumericalError& e) {
            std::fprintf(stderr, "numerical failure: %s\n", e.what());
            return 1;
        }
    }
    return 2;
}
