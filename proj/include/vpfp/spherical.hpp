#pragma once

#include <utility>
#include <vector>

#include "vpfp/basis.hpp"

namespace vpfp {

// Orthonormal velocity functions axisymmetric about e1,
//   phi_{n,l}(v) ~ S_l(v) L_n^{(l+1/2)}(|v|^2/2) e^{-|v|^2/4},  2n + l <= N,
// with S_l the zonal solid harmonic |v|^l P_l(v1/|v|). T maps Cartesian Hermite
// coefficients to (n, l) coefficients; it is exact on axisymmetric vectors.
struct AxisymmetricBasis {
    int max_degree = 0;
    std::vector<std::pair<int, int>> nl;  // (n, l) per row
    MatR T;                               // rows nl, columns Cartesian index

    int index(int n, int l) const;  // -1 when absent
    int size() const { return int(nl.size()); }
    int max_l() const { return max_degree; }
};

AxisymmetricBasis build_axisymmetric(const BasisSpec& b);

// phi_{n,l} at velocity v (orthonormal in L^2(dv)).
double axisymmetric_function(int n, int l, const std::array<double, 3>& v);

}  // namespace vpfp
