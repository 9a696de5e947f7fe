#pragma once

#include "curvjac/curvature.hpp"

namespace curvjac {

/// The operator U -> sum_ab P_ab R(U, e_a) e_b for a symmetric coefficient
/// matrix P, i.e. entries eps_u sum_ab P_ab R(v, a, b, u). Every Jacobi-type
/// operator in this library is one of these contractions.
Operator jacobi_contract(const Model& model, const Matrix& p);

/// J(X) U = R(U, X) X. X is used as given (J is homogeneous of degree 2).
/// Throws NullVector when |<X,X>| <= tol (1 + |X|^2).
Operator jacobi_op(const Model& model, const Vector& x, double tol = kDefaultTol);

/// J(pi) = sum_i eps_i J(Y_i) over the signed orthonormal frame of pi.
Operator higher_jacobi_op(const Model& model, const Subspace& pi);

/// Polarized Jacobi form B(e_a, e_b) U = (R(U,e_a) e_b + R(U,e_b) e_a) / 2.
Operator polarized_jacobi(const Model& model, int a, int b);

/// Curvature operator R(e_a, e_b): U -> R(e_a, e_b) U.
Operator curvature_operator(const Model& model, int a, int b);

/// |[A,B]|_F / (1 + |A|_F |B|_F).
double normalized_commutator(const Operator& a, const Operator& b);

/// Normalized commutator residual of J(pi1) and J(pi2).
double commute_residual(const Model& model, const Subspace& pi1, const Subspace& pi2);

struct CommutationCheck {
  bool holds = false;
  double residual = 0.0;
};

/// J(X) against J(X-perp).
CommutationCheck check_c1(const Model& model, const Vector& x, double tol = kDefaultTol);

/// J(alpha) against J(alpha-perp) for a non-degenerate 2-plane alpha.
CommutationCheck check_c2(const Model& model, const Subspace& alpha, double tol = kDefaultTol);

/// |J(pi) + J(pi-perp) - rho|_F / (1 + |rho|_F). Vanishes identically.
double jacobi_ricci_residual(const Model& model, const Subspace& pi);

}  // namespace curvjac
