#include "tps/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "tps/errors.hpp"

namespace tps {

Propagator::Propagator(const Superoperator& l, double condition_limit) : l_(&l) {
  Eigen::ComplexEigenSolver<Matrix> es(l.m);
  if (es.info() == Eigen::Success) {
    v_ = es.eigenvectors();
    eigenvalues_ = es.eigenvalues();
    const Eigen::PartialPivLU<Matrix> lu(v_);
    v_inv_ = lu.inverse();
    condition_ = v_.cwiseAbs().colwise().sum().maxCoeff() *
                 v_inv_.cwiseAbs().colwise().sum().maxCoeff();
    eigen_ok_ = condition_ < condition_limit;
  }
}

Vector Propagator::apply(double t, const Vector& x) const {
  if (t < 0.0) throw InvalidInput("propagate: negative time rejected");
  if (eigen_ok_) {
    Vector coeffs = v_inv_ * x;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      coeffs(k) *= std::exp(eigenvalues_(k) * t);
    }
    return v_ * coeffs;
  }
  return (l_->m * t).exp() * x;
}

std::vector<Complex> Propagator::sweep(const Matrix& observable, const Vector& x0,
                                       const std::vector<double>& taus_ns) const {
  for (size_t i = 0; i < taus_ns.size(); ++i) {
    if (taus_ns[i] < 0.0) throw InvalidInput("sweep: negative delay");
    if (i > 0 && taus_ns[i] < taus_ns[i - 1]) throw InvalidInput("sweep: delays must ascend");
  }
  std::vector<Complex> out(taus_ns.size());
  const Vector obs_vec = vec(observable.adjoint().eval());
  if (eigen_ok_) {
    // Tr[O exp(Lt) x0] = sum_k (obs^H V)_k exp(lambda_k t) (V^-1 x0)_k
    const Vector coeffs = v_inv_ * x0;
    const Eigen::RowVectorXcd weights = obs_vec.adjoint() * v_;
    for (size_t i = 0; i < taus_ns.size(); ++i) {
      Complex acc = 0.0;
      for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        acc += weights(k) * std::exp(eigenvalues_(k) * taus_ns[i]) * coeffs(k);
      }
      out[i] = acc;
    }
    return out;
  }
  // Fallback: step through gaps with explicit matrix exponentials.
  Vector state = x0;
  double t_prev = 0.0;
  for (size_t i = 0; i < taus_ns.size(); ++i) {
    const double gap = taus_ns[i] - t_prev;
    if (gap > 0.0) state = ((l_->m * gap).exp() * state).eval();
    t_prev = taus_ns[i];
    out[i] = obs_vec.dot(state);
  }
  return out;
}

DensityOperator propagate(const Superoperator& l, const DensityOperator& rho0, double t_ns) {
  if (t_ns < 0.0) throw InvalidInput("propagate: t must be nonnegative");
  const Propagator prop(l);
  Matrix rho = unvec(prop.apply(t_ns, vec(rho0.m)));
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-9 || !is_hermitian(rho, 1e-9)) {
    throw ConvergenceError("propagate: trace or Hermiticity drifted beyond 1e-9");
  }
  return DensityOperator{std::move(rho)};
}

std::vector<Complex> regression_correlator(const Superoperator& l, const DensityOperator& rho,
                                           const Matrix& pre_op, const Matrix& post_op,
                                           const Matrix& observable,
                                           const std::vector<double>& tau_grid_ns) {
  const int dim = l.dim;
  if (pre_op.rows() != dim || post_op.rows() != dim || observable.rows() != dim ||
      rho.dim() != dim) {
    throw InvalidInput("regression_correlator: operator dimension mismatch");
  }
  const Propagator prop(l);
  const Vector x0 = vec((pre_op * rho.m * post_op).eval());
  return prop.sweep(observable, x0, tau_grid_ns);
}

}  // namespace tps
