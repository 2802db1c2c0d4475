#include "vpfp/basis.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace vpfp {

Proj parse_proj(const std::string& s) {
    if (s == "P0") return Proj::P0;
    if (s == "Pm") return Proj::Pm;
    if (s == "P1") return Proj::P1;
    if (s == "P2") return Proj::P2;
    if (s == "P3") return Proj::P3;
    throw UsageError("unknown projection '" + s + "'");
}

const char* proj_name(Proj p) {
    switch (p) {
        case Proj::P0: return "P0";
        case Proj::Pm: return "Pm";
        case Proj::P1: return "P1";
        case Proj::P2: return "P2";
        case Proj::P3: return "P3";
    }
    return "?";
}

BasisSpec::BasisSpec(int max_degree) : N_(max_degree) {
    if (max_degree < 2)
        throw UsageError("build_basis: max_degree must be >= 2 (P3 block would be empty)");
    const int n1 = N_ + 1;
    lookup_.assign(std::size_t(n1) * n1 * n1, -1);
    for (int n = 0; n <= N_; ++n)
        for (int a1 = n; a1 >= 0; --a1)
            for (int a2 = n - a1; a2 >= 0; --a2) {
                int a3 = n - a1 - a2;
                lookup_[(std::size_t(a1) * n1 + a2) * n1 + a3] = int(table_.size());
                table_.push_back({a1, a2, a3});
            }
    chain_of_.assign(table_.size(), -1);
    for (int s = 0; s <= N_; ++s)
        for (int a2 = s; a2 >= 0; --a2) {
            Chain c;
            c.a2 = a2;
            c.a3 = s - a2;
            c.shift = s;
            for (int a1 = 0; a1 + s <= N_; ++a1) {
                int i = index_of(a1, c.a2, c.a3);
                c.idx.push_back(i);
                chain_of_[i] = int(chains_.size());
            }
            chains_.push_back(std::move(c));
        }
}

int BasisSpec::index_of(int a1, int a2, int a3) const {
    if (a1 < 0 || a2 < 0 || a3 < 0 || a1 + a2 + a3 > N_) return -1;
    const int n1 = N_ + 1;
    return lookup_[(std::size_t(a1) * n1 + a2) * n1 + a3];
}

bool BasisSpec::in_projection(int i, Proj p) const {
    switch (p) {
        case Proj::P0: return i == 0;
        case Proj::Pm: return i >= 1 && i <= 3;
        case Proj::P1: return i != 0;
        case Proj::P2: return i <= 3;
        case Proj::P3: return i > 3;
    }
    return false;
}

std::vector<int> BasisSpec::projection_indices(Proj p) const {
    std::vector<int> out;
    for (int i = 0; i < dimension(); ++i)
        if (in_projection(i, p)) out.push_back(i);
    return out;
}

nlohmann::json BasisSpec::manifest() const {
    nlohmann::json j;
    j["max_degree"] = N_;
    j["dimension"] = dimension();
    j["ordering"] = "graded-lex: degree ascending, a1 descending, a2 descending";
    auto tab = nlohmann::json::array();
    for (const auto& m : table_) tab.push_back({m.a1, m.a2, m.a3});
    j["multi_indices"] = tab;
    return j;
}

std::string BasisSpec::manifest_hash() const {
    std::string s = manifest().dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

BasisPtr build_basis(int max_degree) { return std::make_shared<const BasisSpec>(max_degree); }

VecR l_diagonal(const BasisSpec& b) {
    VecR d(b.dimension());
    for (int i = 0; i < b.dimension(); ++i) d(i) = -double(b.multi_index(i).degree());
    return d;
}

static void check_shape(const BasisSpec& b, const VelocityVector& f) {
    if (f.size() != b.dimension()) throw UsageError("velocity vector does not match basis dimension");
}

VelocityVector apply_L(const BasisSpec& b, const VelocityVector& f) {
    check_shape(b, f);
    return (l_diagonal(b).cast<cxd>().array() * f.array()).matrix();
}

VelocityVector project(const BasisSpec& b, const VelocityVector& f, Proj which) {
    check_shape(b, f);
    VelocityVector g = f;
    for (int i = 0; i < b.dimension(); ++i)
        if (!b.in_projection(i, which)) g(i) = 0.0;
    return g;
}

namespace {

MultiIndex shifted(MultiIndex m, int k, int d) {
    if (k == 0) m.a1 += d;
    else if (k == 1) m.a2 += d;
    else m.a3 += d;
    return m;
}

// sign_up multiplies the raising part; half scales both (grad uses 1/2).
SpMat ladder(const BasisSpec& b, const BasisSpec& out, int k, double up, double down) {
    if (k < 0 || k > 2) throw UsageError("velocity component must be 0, 1 or 2");
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < b.dimension(); ++i) {
        const MultiIndex m = b.multi_index(i);
        const int ak = m[k];
        MultiIndex u = shifted(m, k, 1);
        int iu = out.index_of(u.a1, u.a2, u.a3);
        if (iu >= 0) trip.emplace_back(iu, i, up * std::sqrt(double(ak + 1)));
        if (ak > 0) {
            MultiIndex d = shifted(m, k, -1);
            int id = out.index_of(d.a1, d.a2, d.a3);
            if (id >= 0) trip.emplace_back(id, i, down * std::sqrt(double(ak)));
        }
    }
    SpMat M(out.dimension(), b.dimension());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

}  // namespace

SpMat mult_v_ext(const BasisSpec& b, const BasisSpec& ext, int k) { return ladder(b, ext, k, 1.0, 1.0); }
SpMat grad_v_ext(const BasisSpec& b, const BasisSpec& ext, int k) { return ladder(b, ext, k, -0.5, 0.5); }
SpMat mult_v(const BasisSpec& b, int k) { return ladder(b, b, k, 1.0, 1.0); }
SpMat grad_v(const BasisSpec& b, int k) { return ladder(b, b, k, -0.5, 0.5); }

double grad_v_norm(const BasisSpec& b, const VelocityVector& f) {
    check_shape(b, f);
    BasisSpec ext(b.max_degree() + 1);
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += (grad_v_ext(b, ext, k).cast<cxd>() * f).squaredNorm();
    return std::sqrt(s);
}

double sigma_norm(const BasisSpec& b, const VelocityVector& f) {
    check_shape(b, f);
    BasisSpec ext(b.max_degree() + 1);
    double s = f.squaredNorm();
    for (int k = 0; k < 3; ++k) {
        s += (grad_v_ext(b, ext, k).cast<cxd>() * f).squaredNorm();
        s += (mult_v_ext(b, ext, k).cast<cxd>() * f).squaredNorm();
    }
    return std::sqrt(s);
}

cxd weighted_inner(const VelocityVector& f, const VelocityVector& g, double xi_mag) {
    if (!(xi_mag > 0.0)) throw UsageError("weighted_inner: xi_mag must be > 0");
    if (f.size() != g.size()) throw UsageError("weighted_inner: size mismatch");
    return f.dot(g) + std::conj(f(0)) * g(0) / (xi_mag * xi_mag);
}

double weighted_norm(const VelocityVector& f, double xi_mag) {
    return std::sqrt(std::real(weighted_inner(f, f, xi_mag)));
}

void hermite_functions(int n, double x, double* out) {
    out[0] = std::exp(-0.25 * x * x) / std::pow(2.0 * kPi, 0.25);
    if (n >= 1) out[1] = x * out[0];
    for (int k = 1; k < n; ++k)
        out[k + 1] = (x * out[k] - std::sqrt(double(k)) * out[k - 1]) / std::sqrt(double(k + 1));
}

double basis_function(const BasisSpec& b, int i, const std::array<double, 3>& v) {
    const MultiIndex m = b.multi_index(i);
    std::vector<double> h(b.max_degree() + 1);
    double val = 1.0;
    for (int k = 0; k < 3; ++k) {
        hermite_functions(b.max_degree(), v[k], h.data());
        val *= h[m[k]];
    }
    return val;
}

CoercivityReport measure_coercivity(const BasisSpec& b, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CoercivityReport rep;
    rep.samples = samples;
    rep.mu_N = INFINITY;
    const int d = b.dimension();
    for (int s = 0; s < samples; ++s) {
        VelocityVector f(d);
        for (int i = 0; i < d; ++i) f(i) = cxd(nd(rng), nd(rng));
        double lff = std::real(f.dot(apply_L(b, f)));
        VelocityVector p1 = project(b, f, Proj::P1);
        double n2 = p1.squaredNorm();
        if (lff > -n2 * (1.0 - 1e-14)) ++rep.violations;
        double sig = sigma_norm(b, p1);
        rep.mu_N = std::min(rep.mu_N, -lff / (sig * sig));
    }
    return rep;
}

}  // namespace vpfp
