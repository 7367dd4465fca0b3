#pragma once

#include <vector>

#include "tps/liouvillian.hpp"
#include "tps/steady_state.hpp"

namespace tps {

// exp(L t) applied through one eigendecomposition of the generator, making
// delay sweeps cheap after a single factorization. Falls back to
// scaling-and-squaring when the eigenvector basis is ill conditioned.
class Propagator {
 public:
  explicit Propagator(const Superoperator& l, double condition_limit = 1e8);

  Vector apply(double t, const Vector& x) const;

  // Tr[observable * exp(L tau) unvec(x0)] for each tau (any sign mix is
  // rejected; taus must be nonnegative ascending).
  std::vector<Complex> sweep(const Matrix& observable, const Vector& x0,
                             const std::vector<double>& taus_ns) const;

  bool using_eigenbasis() const { return eigen_ok_; }
  double basis_condition() const { return condition_; }

 private:
  const Superoperator& generator() const { return *l_; }

  const Superoperator* l_;
  bool eigen_ok_ = false;
  double condition_ = 0.0;
  Vector eigenvalues_;
  Matrix v_;      // eigenvectors
  Matrix v_inv_;
};

// rho(t) = exp(L t) rho0; t >= 0. Trace and Hermiticity are preserved to 1e-9.
DensityOperator propagate(const Superoperator& l, const DensityOperator& rho0, double t_ns);

// Quantum regression theorem: value(tau) = Tr[observable exp(L tau)(pre rho post)].
std::vector<Complex> regression_correlator(const Superoperator& l, const DensityOperator& rho,
                                           const Matrix& pre_op, const Matrix& post_op,
                                           const Matrix& observable,
                                           const std::vector<double>& tau_grid_ns);

}  // namespace tps
