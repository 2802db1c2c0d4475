#include "vpfp/expm.hpp"

#include <cmath>

#include <Eigen/LU>

namespace vpfp {

namespace {

constexpr double kB[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                           1187353796428800.0,  129060195264000.0,   10559470521600.0,
                           670442572800.0,      33522128640.0,       1323241920.0,
                           40840800.0,          960960.0,            16380.0,
                           182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

double norm1(const MatC& A) { return A.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

ExpmResult expm_pade13(const MatC& A, double tol) {
    const int n = int(A.rows());
    if (A.cols() != n) throw UsageError("expm: matrix must be square");
    ExpmResult res;
    if (n == 0) {
        res.value = A;
        return res;
    }
    if (!A.allFinite()) throw NumericalError("expm: non-finite input");
    double a = norm1(A);
    int s = 0;
    if (a > kTheta13) s = int(std::ceil(std::log2(a / kTheta13)));
    const double scale = std::ldexp(1.0, -s);
    const MatC As = A * scale;
    const double as = a * scale;
    const MatC I = MatC::Identity(n, n);
    const MatC A2 = As * As;
    const MatC A4 = A2 * A2;
    const MatC A6 = A4 * A2;
    MatC U = A6 * (kB[13] * A6 + kB[11] * A4 + kB[9] * A2);
    U += kB[7] * A6 + kB[5] * A4 + kB[3] * A2 + kB[1] * I;
    U = As * U;
    MatC V = A6 * (kB[12] * A6 + kB[10] * A4 + kB[8] * A2);
    V += kB[6] * A6 + kB[4] * A4 + kB[2] * A2 + kB[0] * I;
    const MatC Q = V - U;
    Eigen::PartialPivLU<MatC> lu(Q);
    MatC R = lu.solve(V + U);
    // leading term of the [13/13] remainder: (13!)^2 / (26! 27!) x^27
    const double c27 = std::exp(2 * std::lgamma(14.0) - std::lgamma(27.0) - std::lgamma(28.0));
    const double trunc = c27 * std::pow(as, 27);
    const double condQ = norm1(Q) * norm1(lu.inverse());
    res.backward_error = std::max(trunc, condQ * 1.1102230246251565e-16);
    for (int k = 0; k < s; ++k) R = R * R;
    res.squarings = s;
    if (!R.allFinite()) throw NumericalError("expm: overflow during squaring");
    if (res.backward_error > tol)
        throw NumericalError("expm: backward-error estimate " + std::to_string(res.backward_error) +
                             " exceeds tolerance");
    res.value = std::move(R);
    return res;
}

MatC expmv(const LinearMap& apply, double norm1G, double t, const MatC& X) {
    if (t < 0) throw UsageError("expmv: t must be >= 0");
    if (t == 0.0 || norm1G == 0.0) return X;
    constexpr double kTheta = 5.0;
    constexpr int kMaxTerms = 60;
    const int steps = std::max(1, int(std::ceil(t * norm1G / kTheta)));
    const double h = t / steps;
    MatC Y = X;
    for (int s = 0; s < steps; ++s) {
        MatC term = Y;
        MatC sum = Y;
        int small = 0;
        for (int m = 1; m <= kMaxTerms; ++m) {
            term = apply(term) * (h / m);
            sum += term;
            double tn = term.norm(), sn = sum.norm();
            if (tn <= 1e-17 * sn || tn == 0.0) {
                if (++small == 2) break;
            } else {
                small = 0;
            }
        }
        Y = std::move(sum);
    }
    return Y;
}

double power_norm(const LinearMap& fwd, const LinearMap& adj, VecC x, int max_iter, double rtol) {
    double nx = x.norm();
    if (nx == 0.0) throw UsageError("power_norm: zero start vector");
    x /= nx;
    double sigma = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        VecC y = fwd(x);
        double s_new = y.norm();
        if (s_new == 0.0) return 0.0;
        VecC z = adj(y);
        double nz = z.norm();
        x = z / nz;
        if (it > 0 && std::abs(s_new - sigma) <= rtol * s_new) return std::max(s_new, std::sqrt(nz));
        sigma = s_new;
    }
    return sigma;
}

}  // namespace vpfp
