#include "tps/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "tps/errors.hpp"

namespace tps {

Vector vec(const Matrix& m) {
  // Eigen matrices are column-major, so column stacking is a straight copy.
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v) {
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (dim * dim != v.size()) throw InvalidInput("unvec: length is not a perfect square");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Matrix spre(const Matrix& a) {
  return kron(identity_op(int(a.rows())), a);
}

Matrix spost(const Matrix& b) {
  return kron(b.transpose(), identity_op(int(b.rows())));
}

double max_abs(const Matrix& m) {
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) < tol;
}

Matrix identity_op(int dim) {
  return Matrix::Identity(dim, dim);
}

Matrix lowering_op() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

Matrix number_op() {
  Matrix n = Matrix::Zero(2, 2);
  n(1, 1) = 1.0;
  return n;
}

Matrix embed_qubit_op(const Matrix& op, int slot, int n_slots) {
  if (op.rows() != 2 || op.cols() != 2) throw InvalidInput("embed_qubit_op: op must be 2x2");
  if (slot < 0 || slot >= n_slots) throw InvalidInput("embed_qubit_op: slot out of range");
  Matrix out = (slot == 0) ? op : identity_op(2).eval();
  for (int k = 1; k < n_slots; ++k) {
    out = kron(out, (k == slot) ? op : identity_op(2));
  }
  return out;
}

}  // namespace tps
