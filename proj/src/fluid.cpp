#include "vpfp/fluid.hpp"

#include <cmath>

namespace vpfp {

Eigen::Matrix4cd fluid_block(double s) {
    if (!(s > 0.0)) throw UsageError("fluid_block: xi_mag must be > 0");
    Eigen::Matrix4cd B = Eigen::Matrix4cd::Zero();
    B(0, 1) = cxd(0.0, -s);
    B(1, 0) = cxd(0.0, -s - 1.0 / s);
    B(1, 1) = -1.0;
    B(2, 2) = -1.0;
    B(3, 3) = -1.0;
    return B;
}

cxd fluid_pairing(const Eigen::Vector4cd& f, const Eigen::Vector4cd& g, double s) {
    return (1.0 + 1.0 / (s * s)) * f(0) * g(0) + f(1) * g(1) + f(2) * g(2) + f(3) * g(3);
}

FluidEigenSystem solve_fluid_eigensystem(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw UsageError("solve_fluid_eigensystem: xi_mag must be > 0");
    FluidEigenSystem sys;
    sys.xi_mag = s;
    const double w = 0.5 * std::sqrt(4.0 * s * s + 3.0);
    sys.lambdas = {cxd(-0.5, -w), cxd(-0.5, w), cxd(-1.0, 0.0), cxd(-1.0, 0.0)};
    for (int k = 0; k < 2; ++k) {
        const cxd lam = sys.lambdas[k];
        const cxd den = lam * lam - s * s - 1.0;
        if (std::abs(den) < 1e-14) throw NumericalError("solve_fluid_eigensystem: degenerate branch");
        sys.b[k] = std::sqrt(lam * lam / den);  // principal branch
        sys.a[k] = cxd(0.0, -1.0) * sys.b[k] / lam;
        sys.psi[k] << s * sys.a[k], sys.b[k], 0.0, 0.0;
    }
    sys.psi[2] << 0.0, 0.0, 1.0, 0.0;
    sys.psi[3] << 0.0, 0.0, 0.0, 1.0;
    return sys;
}

FluidEigenSystem solve_fluid_eigensystem_tracked(double s, const FluidEigenSystem& prev) {
    FluidEigenSystem sys = solve_fluid_eigensystem(s);
    for (int k = 0; k < 2; ++k)
        if (std::abs(sys.b[k] + prev.b[k]) < std::abs(sys.b[k] - prev.b[k])) {
            sys.b[k] = -sys.b[k];
            sys.a[k] = -sys.a[k];
            sys.psi[k] = -sys.psi[k];
        }
    return sys;
}

Eigen::Matrix4cd fluid_semigroup(const FluidEigenSystem& sys, double t) {
    if (!(t >= 0.0)) throw UsageError("fluid_semigroup: t must be >= 0");
    const double s = sys.xi_mag;
    Eigen::Vector4cd wdiag(1.0 + 1.0 / (s * s), 1.0, 1.0, 1.0);
    Eigen::Matrix4cd E = Eigen::Matrix4cd::Zero();
    for (int j = 0; j < 4; ++j) {
        Eigen::Vector4cd left = wdiag.cwiseProduct(sys.psi[j]);
        E += std::exp(sys.lambdas[j] * t) * sys.psi[j] * left.transpose();
    }
    return E;
}

}  // namespace vpfp
