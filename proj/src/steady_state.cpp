#include "tps/steady_state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <sstream>

#include "tps/errors.hpp"

namespace tps {

namespace {

using LongComplex = std::complex<long double>;
using LongMatrix = Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<LongComplex, Eigen::Dynamic, 1>;

// Residual b - M x accumulated in long double; the correction solve reuses
// the double-precision factorization.
Vector refine(const Eigen::PartialPivLU<Matrix>& lu, const Matrix& m, const Vector& b,
              Vector x, int iterations) {
  const LongMatrix ml = m.cast<LongComplex>();
  const LongVector bl = b.cast<LongComplex>();
  for (int it = 0; it < iterations; ++it) {
    const LongVector residual = bl - ml * x.cast<LongComplex>();
    const Vector correction = lu.solve(residual.cast<Complex>());
    x += correction;
  }
  return x;
}

}  // namespace

void DensityOperator::validate(double trace_tol, double herm_tol, double positivity_tol) const {
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > trace_tol) {
    throw InvalidInput("density operator: trace deviates from one by " +
                       std::to_string(std::abs(tr - 1.0)));
  }
  if (!is_hermitian(m, herm_tol)) {
    throw InvalidInput("density operator: not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  if (es.eigenvalues().minCoeff() < -positivity_tol) {
    throw InvalidInput("density operator: negative eigenvalue " +
                       std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityOperator steady_state(const Superoperator& l, const SteadyStateOptions& opts) {
  const int dim = l.dim;
  const int n = dim * dim;
  if (l.m.rows() != n || l.m.cols() != n) {
    throw InvalidInput("steady_state: superoperator shape inconsistent with dim");
  }

  if (opts.verify_spectrum) {
    Eigen::ComplexEigenSolver<Matrix> es(l.m, /*computeEigenvectors=*/false);
    int zero_count = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const Complex lambda = es.eigenvalues()(k);
      if (std::abs(lambda) < opts.zero_tol) {
        ++zero_count;
      } else if (lambda.real() >= 0.0) {
        std::ostringstream msg;
        msg << "steady_state: nonzero eigenvalue with nonnegative real part " << lambda;
        throw InvalidInput(msg.str());
      }
    }
    if (zero_count != 1) {
      throw InvalidInput("steady_state: no unique steady state (found " +
                         std::to_string(zero_count) + " null eigenvalues)");
    }
  }

  // Row 0 of L is one of the linearly dependent diagonal-entry rows (their sum
  // vanishes by trace preservation), so replacing it keeps the system square
  // and nonsingular for a unique steady state.
  Matrix m = l.m;
  for (int k = 0; k < n; ++k) m(0, k) = 0.0;
  for (int i = 0; i < dim; ++i) m(0, i + dim * i) = 1.0;
  Vector b = Vector::Zero(n);
  b(0) = 1.0;

  const Eigen::PartialPivLU<Matrix> lu(m);
  Vector x = lu.solve(b);
  x = refine(lu, m, b, std::move(x), 2);

  Matrix rho = unvec(x);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();

  const double residual = max_abs(unvec(l.m * vec(rho)));
  if (!(residual < opts.residual_tol)) {
    throw ConvergenceError(
        "steady_state: residual " + std::to_string(residual) +
            " exceeds tolerance (ill-conditioned or degenerate generator)",
        {residual});
  }

  return DensityOperator{std::move(rho)};
}

}  // namespace tps
