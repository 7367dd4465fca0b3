#pragma once

#include "tps/liouvillian.hpp"

namespace tps {

// Trace-one, Hermitian, positive (within tolerance) state.
struct DensityOperator {
  Matrix m;

  int dim() const { return int(m.rows()); }
  // Throws InvalidInput if trace, Hermiticity, or positivity are violated.
  void validate(double trace_tol = 1e-10, double herm_tol = 1e-10,
                double positivity_tol = 1e-9) const;
};

struct SteadyStateOptions {
  // Full spectral check of the generator: exactly one eigenvalue inside
  // |lambda| < zero_tol and all others with negative real part.
  bool verify_spectrum = true;
  double zero_tol = 1e-9;
  double residual_tol = 1e-10;  // required max |L(rho_ss)| element
};

// Unique null state of L, normalized to trace one and Hermitized.
// LU solve with the trace constraint plus extended-precision iterative
// refinement; sensor populations sit many orders of magnitude below the
// leading components and need the refined solve.
DensityOperator steady_state(const Superoperator& l, const SteadyStateOptions& opts = {});

}  // namespace tps
