#pragma once

// Inner-product spaces of arbitrary signature (p,q) in their canonical
// orthonormal basis, signed orthonormal frames, non-degenerate subspaces,
// linear operators and seeded Grassmannian sampling.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "curvjac/error.hpp"

namespace curvjac {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-9;

/// Non-degenerate symmetric form diag(+1 x p, -1 x q) on R^(p+q).
class InnerProduct {
 public:
  InnerProduct(int p, int q);

  static InnerProduct riemannian(int dim) { return InnerProduct(dim, 0); }

  int dim() const noexcept { return p_ + q_; }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  bool is_riemannian() const noexcept { return q_ == 0; }

  /// epsilon_i: +1 for the first p directions, -1 for the rest (0-based i).
  double sign(int i) const noexcept { return i < p_ ? 1.0 : -1.0; }
  Vector signs() const;
  Matrix gram() const;

  double operator()(const Vector& x, const Vector& y) const;
  double norm_sq(const Vector& x) const { return (*this)(x, x); }

  /// x^flat, i.e. the covector <x, .> expressed in canonical coordinates.
  Vector lower(const Vector& x) const;

  bool operator==(const InnerProduct&) const = default;

 private:
  int p_;
  int q_;
};

/// Linear endomorphism in the canonical basis, (A v)_i = sum_j A_ij v_j.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix entries);

  static Operator zero(int dim) { return Operator(Matrix::Zero(dim, dim)); }
  static Operator identity(int dim) { return Operator(Matrix::Identity(dim, dim)); }

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }

  Vector apply(const Vector& v) const { return m_ * v; }
  double frobenius_norm() const { return m_.norm(); }

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(double s, const Operator& a);

 private:
  Matrix m_;
};

/// [A,B] = AB - BA.
Operator commutator(const Operator& a, const Operator& b);

/// True when <Au, v> = <u, Av> for the canonical basis within `tol` relative.
bool is_self_adjoint(const InnerProduct& g, const Operator& a, double tol = 1e-10);

/// Columns Y_i with <Y_i, Y_j> = signs[i] * delta_ij.
struct SignedFrame {
  Matrix vectors;
  std::vector<int> signs;

  int size() const noexcept { return static_cast<int>(signs.size()); }
  int positive() const noexcept;
  int negative() const noexcept { return size() - positive(); }
  Vector column(int i) const { return vectors.col(i); }
};

/// Sequential signed Gram-Schmidt in input order. Each partial projection w is
/// normalized by sqrt|<w,w>| and its sign recorded. Throws Degenerate when
/// |<w,w>| <= tol * (1 + |w|^2) or when w has collapsed relative to its input
/// (linear dependence).
SignedFrame gram_schmidt(const InnerProduct& g, std::span<const Vector> vectors,
                         double tol = kDefaultTol);
SignedFrame gram_schmidt(const InnerProduct& g, const Matrix& columns,
                         double tol = kDefaultTol);

/// A non-degenerate linear subspace together with a cached signed
/// orthonormal frame. The frame is obtained by diagonalizing the Gram
/// matrix of a Euclidean-orthonormal basis of the span, so it exists for every
/// non-degenerate subspace regardless of how the basis is ordered.
class Subspace {
 public:
  static Subspace span(const InnerProduct& g, const Matrix& basis_columns,
                       double tol = kDefaultTol);
  static Subspace span(const InnerProduct& g, std::span<const Vector> basis,
                       double tol = kDefaultTol);
  static Subspace coordinate(const InnerProduct& g, std::span<const int> indices);

  const InnerProduct& ambient() const noexcept { return g_; }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const noexcept { return basis_; }
  const SignedFrame& frame() const noexcept { return frame_; }
  int r() const noexcept { return frame_.positive(); }
  int s() const noexcept { return frame_.negative(); }

  /// P = sum_i eps_i Y_i Y_i^T; P * G is the g-orthogonal projector onto the
  /// subspace and P itself is independent of the chosen frame.
  Matrix signed_projector() const;

  /// Largest Euclidean norm squared of a frame vector (1 in Riemannian
  /// signature, grows as the subspace approaches a null direction).
  double frame_norm_sq() const;

 private:
  Subspace(InnerProduct g, Matrix basis, SignedFrame frame)
      : g_(g), basis_(std::move(basis)), frame_(std::move(frame)) {}

  InnerProduct g_;
  Matrix basis_;
  SignedFrame frame_;
};

/// pi-perp = { v : <v, x> = 0 for all x in pi }.
Subspace orthogonal_complement(const Subspace& pi, double tol = kDefaultTol);

struct EigenCluster {
  std::complex<double> value;
  int multiplicity = 0;
};

/// Eigenvalues merged by single linkage with radius tol * (1 + max|lambda|).
/// Clusters are sorted by (real, imag); a cluster whose imaginary part lies
/// inside the radius is reported as real.
std::vector<EigenCluster> eigenvalue_clusters(const Operator& a, double tol = kDefaultTol);

/// 0 <= r <= p, 0 <= s <= q and 1 <= r + s <= p + q - 1.
bool is_admissible(int p, int q, int r, int s) noexcept;

struct SamplingOptions {
  int max_tries = 1000;
  double tol = kDefaultTol;
  /// Reject samples whose signed frame has a vector with |Y|^2 above this
  /// bound. Irrelevant in definite signature.
  double frame_norm_limit = 100.0;
};

/// Per-sample seed for sample `index` of a sweep started at `base`
/// (splitmix64 finalizer over both words).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

Vector random_normal_vector(std::mt19937_64& rng, int dim);

/// Rejection sampler on Gr_{r,s}: draw r+s standard-normal vectors, build the
/// subspace, retry on degeneracy or wrong signature.
Subspace sample_grassmannian(const InnerProduct& g, int r, int s, std::uint64_t seed,
                             const SamplingOptions& opts = {});

/// Random non-null vector normalized to <X,X> = +-1 (any causal type).
Vector sample_unit_vector(const InnerProduct& g, std::mt19937_64& rng,
                          const SamplingOptions& opts = {});

/// Random g-orthonormal basis of the whole space, ordered with the p
/// spacelike vectors first so that it maps the canonical form to itself.
SignedFrame sample_orthonormal_frame(const InnerProduct& g, std::uint64_t seed,
                                     const SamplingOptions& opts = {});

}  // namespace curvjac
