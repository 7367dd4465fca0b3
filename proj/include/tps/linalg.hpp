#pragma once

#include <Eigen/Dense>
#include <complex>

namespace tps {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Vectorization is column-stacking: vec(rho)[i + dim*j] = rho(i, j).
// With this convention vec(A rho B) = kron(B^T, A) vec(rho).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v);

Matrix kron(const Matrix& a, const Matrix& b);

// Superoperators for left and right multiplication on vectorized operators.
Matrix spre(const Matrix& a);
Matrix spost(const Matrix& b);

double max_abs(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = 1e-12);

// Two-level building blocks; basis order is {|g>, |e>}.
Matrix identity_op(int dim);
Matrix lowering_op();  // sigma = |g><e|
Matrix number_op();    // sigma^dag sigma

// Embeds op acting on tensor factor `slot` of a chain of two-level systems.
Matrix embed_qubit_op(const Matrix& op, int slot, int n_slots);

}  // namespace tps
