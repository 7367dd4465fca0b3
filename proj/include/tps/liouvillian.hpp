#pragma once

#include <utility>
#include <vector>

#include "tps/linalg.hpp"

namespace tps {

// Lindblad generator on vectorized density operators, units rad/ns.
struct Superoperator {
  int dim = 0;   // Hilbert-space dimension
  Matrix m;      // dim^2 x dim^2

  Vector apply(const Vector& vec_rho) const { return m * vec_rho; }
  Matrix apply(const Matrix& rho) const { return unvec(m * vec(rho)); }
};

// L(rho) = -i[H, rho] + sum_k rate_k (J rho J^dag - 1/2 {J^dag J, rho}).
// H in rad/ns, rates in 1/ns (angular conventions throughout).
Superoperator build_lindblad(const Matrix& hamiltonian,
                             const std::vector<std::pair<Matrix, double>>& jumps);

}  // namespace tps
