#include "tps/liouvillian.hpp"

#include <string>

#include "tps/errors.hpp"

namespace tps {

Superoperator build_lindblad(const Matrix& hamiltonian,
                             const std::vector<std::pair<Matrix, double>>& jumps) {
  const auto dim = hamiltonian.rows();
  if (dim == 0 || hamiltonian.cols() != dim) {
    throw InvalidInput("build_lindblad: hamiltonian must be square and nonempty");
  }
  const double scale = std::max(1.0, max_abs(hamiltonian));
  if (!is_hermitian(hamiltonian, 1e-9 * scale)) {
    throw InvalidInput("build_lindblad: hamiltonian is not Hermitian within tolerance");
  }

  Matrix l = -kI * (spre(hamiltonian) - spost(hamiltonian));
  for (const auto& [jump, rate] : jumps) {
    if (jump.rows() != dim || jump.cols() != dim) {
      throw InvalidInput("build_lindblad: jump operator dimension mismatch (expected " +
                         std::to_string(dim) + ")");
    }
    if (!(rate > 0.0)) {
      throw InvalidInput("build_lindblad: jump rate must be positive");
    }
    const Matrix jdagj = jump.adjoint() * jump;
    l += rate * (kron(jump.conjugate(), jump) - 0.5 * spre(jdagj) - 0.5 * spost(jdagj));
  }

  Superoperator out;
  out.dim = int(dim);
  out.m = std::move(l);
  return out;
}

}  // namespace tps
