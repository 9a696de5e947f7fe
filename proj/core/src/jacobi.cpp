#include "curvjac/jacobi.hpp"

#include <cmath>
#include <string>

namespace curvjac {

Operator jacobi_contract(const Model& model, const Matrix& p) {
  const int m = model.dim();
  if (p.rows() != m || p.cols() != m) {
    throw Error(ErrorKind::DimensionMismatch, "coefficient matrix must be m x m");
  }
  const auto& r = model.curvature();
  const auto& g = model.metric();
  Matrix out = Matrix::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const double w = p(a, b);
      if (w == 0.0) continue;
      for (int v = 0; v < m; ++v)
        for (int u = 0; u < m; ++u) out(u, v) += w * r(v, a, b, u);
    }
  return Operator(g.signs().asDiagonal() * out);
}

Operator jacobi_op(const Model& model, const Vector& x, double tol) {
  const auto& g = model.metric();
  if (x.size() != g.dim()) throw Error(ErrorKind::DimensionMismatch, "vector dimension");
  if (std::abs(g.norm_sq(x)) <= tol * (1.0 + x.squaredNorm())) {
    throw Error(ErrorKind::NullVector, "Jacobi operator needs a non-null vector");
  }
  return jacobi_contract(model, x * x.transpose());
}

Operator higher_jacobi_op(const Model& model, const Subspace& pi) {
  if (pi.ambient() != model.metric()) {
    throw Error(ErrorKind::DimensionMismatch, "subspace lives in a different space");
  }
  return jacobi_contract(model, pi.signed_projector());
}

Operator polarized_jacobi(const Model& model, int a, int b) {
  const int m = model.dim();
  if (a < 0 || a >= m || b < 0 || b >= m) {
    throw Error(ErrorKind::IndexOutOfRange, "basis index out of range");
  }
  Matrix p = Matrix::Zero(m, m);
  p(a, b) += 0.5;
  p(b, a) += 0.5;
  return jacobi_contract(model, p);
}

Operator curvature_operator(const Model& model, int a, int b) {
  const int m = model.dim();
  if (a < 0 || a >= m || b < 0 || b >= m) {
    throw Error(ErrorKind::IndexOutOfRange, "basis index out of range");
  }
  const auto& r = model.curvature();
  const auto& g = model.metric();
  Matrix out(m, m);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) out(u, v) = g.sign(u) * r(a, b, v, u);
  return Operator(std::move(out));
}

double normalized_commutator(const Operator& a, const Operator& b) {
  return commutator(a, b).frobenius_norm() / (1.0 + a.frobenius_norm() * b.frobenius_norm());
}

double commute_residual(const Model& model, const Subspace& pi1, const Subspace& pi2) {
  return normalized_commutator(higher_jacobi_op(model, pi1), higher_jacobi_op(model, pi2));
}

CommutationCheck check_c1(const Model& model, const Vector& x, double tol) {
  const auto& g = model.metric();
  if (x.size() != g.dim()) throw Error(ErrorKind::DimensionMismatch, "vector dimension");
  if (std::abs(g.norm_sq(x)) <= tol * (1.0 + x.squaredNorm())) {
    throw Error(ErrorKind::NullVector, "(C1) needs a non-null vector");
  }
  const Subspace line = Subspace::span(g, Matrix(x));
  const double res = commute_residual(model, line, orthogonal_complement(line));
  return {res <= tol, res};
}

CommutationCheck check_c2(const Model& model, const Subspace& alpha, double tol) {
  if (alpha.dim() != 2) throw Error(ErrorKind::InvalidArgument, "(C2) needs a 2-plane");
  if (model.dim() < 3) throw Error(ErrorKind::InvalidArgument, "(C2) needs dimension >= 3");
  const double res = commute_residual(model, alpha, orthogonal_complement(alpha));
  return {res <= tol, res};
}

double jacobi_ricci_residual(const Model& model, const Subspace& pi) {
  const Operator rho = ricci_operator(model);
  const Operator sum =
      higher_jacobi_op(model, pi) + higher_jacobi_op(model, orthogonal_complement(pi));
  return (sum - rho).frobenius_norm() / (1.0 + rho.frobenius_norm());
}

}  // namespace curvjac
