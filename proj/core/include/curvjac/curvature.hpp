#pragma once

// Algebraic curvature tensors R(X,Y,Z,U) = g(R(X,Y)Z, U) on a canonical
// pseudo-Euclidean space, with the sign convention fixed by
//   constant curvature kappa  <=>  R(X,Y)Z = kappa (g(Y,Z) X - g(X,Z) Y),
// which gives K(e_i, e_j) = R(i,j,j,i) = +kappa on the round sphere.
// Indices are 0-based in the API and 1-based in files and messages.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvjac/bilinear.hpp"

namespace curvjac {

inline constexpr int kMaxDim = 12;

/// Dense m^4 component array R[i][j][k][l] = R(e_i, e_j, e_k, e_l).
class CurvatureTensor {
 public:
  explicit CurvatureTensor(int dim);
  CurvatureTensor(int dim, std::vector<double> components);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return c_.size(); }

  double operator()(int i, int j, int k, int l) const { return c_[offset(i, j, k, l)]; }
  double& operator()(int i, int j, int k, int l) { return c_[offset(i, j, k, l)]; }

  std::span<const double> components() const noexcept { return c_; }

  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;

  /// R(a, b, c, d) for arbitrary vectors.
  double evaluate(const Vector& a, const Vector& b, const Vector& c, const Vector& d) const;

  CurvatureTensor& operator+=(const CurvatureTensor& other);
  CurvatureTensor& operator*=(double s);
  friend CurvatureTensor operator+(CurvatureTensor a, const CurvatureTensor& b) { return a += b; }
  friend CurvatureTensor operator-(CurvatureTensor a, const CurvatureTensor& b);
  friend CurvatureTensor operator*(double s, CurvatureTensor a) { return a *= s; }

 private:
  std::size_t offset(int i, int j, int k, int l) const noexcept {
    const auto m = static_cast<std::size_t>(dim_);
    return ((static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j)) * m +
            static_cast<std::size_t>(k)) * m + static_cast<std::size_t>(l);
  }

  int dim_;
  std::vector<double> c_;
};

enum class SymmetryProperty {
  AntisymmetryFirstPair,   // R(i,j,k,l) = -R(j,i,k,l)
  AntisymmetrySecondPair,  // R(i,j,k,l) = -R(i,j,l,k)
  FirstBianchi,            // R(i,j,k,l) + R(j,k,i,l) + R(k,i,j,l) = 0
  PairExchange,            // R(i,j,k,l) = R(k,l,i,j)
};

std::string_view to_string(SymmetryProperty p) noexcept;

struct SymmetryViolation {
  SymmetryProperty property = SymmetryProperty::AntisymmetryFirstPair;
  std::array<int, 4> indices{};  // 0-based
  double residual = 0.0;
};

struct ValidationReport {
  bool pass = true;
  /// Threshold that was applied: tol * (1 + max|R|).
  double threshold = 0.0;
  /// Largest residual over all four properties (first one found on ties,
  /// scanning properties in order and indices lexicographically).
  SymmetryViolation worst;
};

ValidationReport validate_curvature(const CurvatureTensor& r, double tol = kDefaultTol);

/// The triple (V, <.,.>, A) with A checked against the curvature symmetries.
class Model {
 public:
  /// Throws BianchiViolation (with the worst offender) when validation fails.
  Model(InnerProduct metric, CurvatureTensor curvature, double tol = kDefaultTol);

  const InnerProduct& metric() const noexcept { return g_; }
  const CurvatureTensor& curvature() const noexcept { return r_; }
  int dim() const noexcept { return g_.dim(); }

 private:
  InnerProduct g_;
  CurvatureTensor r_;
};

/// One user-supplied component, 1-based indices as in R_{1221}.
struct CurvatureEntry {
  int i = 0, j = 0, k = 0, l = 0;
  double value = 0.0;
};

/// Fills every unspecified component from the orbit of each entry under the
/// antisymmetries and pair exchange. The first Bianchi identity is checked,
/// never imposed.
Model curvature_from_entries(const InnerProduct& g, std::span<const CurvatureEntry> entries,
                             double tol = kDefaultTol);

/// One representative per non-zero symmetry orbit (i<j, k<l, (i,j) <= (k,l)),
/// 1-based; feeding the result back through curvature_from_entries
/// reproduces the tensor.
std::vector<CurvatureEntry> orbit_representatives(const CurvatureTensor& r, double zero = 0.0);

/// R_g(X,Y,Z,U) = g(Y,Z) g(X,U) - g(X,Z) g(Y,U), the kappa = 1 template.
CurvatureTensor constant_curvature_template(const InnerProduct& g);

/// Ricci (0,2) components rho_ij = sum_k eps_k R(k,i,j,k).
Matrix ricci_form(const Model& model);

/// Ricci operator rho^i_j = eps_i rho_ij.
Operator ricci_operator(const Model& model);

/// Trace of the Ricci operator.
double scalar_curvature(const Model& model);

double sectional_curvature(const Model& model, const Subspace& plane);
double sectional_curvature(const Model& model, const Vector& x, const Vector& y,
                           double tol = kDefaultTol);

/// Canonical index of every block-local index in an orthogonal direct sum:
/// spacelike directions of all blocks first (in block order), then the
/// timelike ones, so that the sum carries the canonical form again.
std::vector<std::vector<int>> direct_sum_layout(std::span<const InnerProduct> blocks);

Model direct_sum(std::span<const Model> blocks);

/// Components R'(a,b,c,d) = R(F_a, F_b, F_c, F_d) for columns F of `frame`
/// (m x k, any k). No orthonormality check.
CurvatureTensor pullback(const CurvatureTensor& r, const Matrix& frame);

/// Re-expresses the model in a full signed orthonormal frame whose sign
/// pattern matches the canonical one.
Model conjugate_basis(const Model& model, const SignedFrame& frame, double tol = kDefaultTol);

}  // namespace curvjac
