#include "curvjac/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace curvjac {

InnerProduct::InnerProduct(int p, int q) : p_(p), q_(q) {
  if (p < 0 || q < 0 || p + q < 1) {
    throw Error(ErrorKind::InvalidArgument,
                "signature (" + std::to_string(p) + "," + std::to_string(q) + ") is not valid");
  }
}

Vector InnerProduct::signs() const {
  Vector eps(dim());
  for (int i = 0; i < dim(); ++i) eps(i) = sign(i);
  return eps;
}

Matrix InnerProduct::gram() const { return signs().asDiagonal(); }

double InnerProduct::operator()(const Vector& x, const Vector& y) const {
  if (x.size() != dim() || y.size() != dim()) {
    throw Error(ErrorKind::DimensionMismatch, "vector dimension does not match inner product");
  }
  double acc = 0.0;
  for (int i = 0; i < dim(); ++i) acc += sign(i) * x(i) * y(i);
  return acc;
}

Vector InnerProduct::lower(const Vector& x) const { return signs().cwiseProduct(x); }

Operator::Operator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "operator matrix must be square");
  }
  if (!m_.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "operator entries must be finite");
  }
}

namespace {

void require_same_dim(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "operator dimensions " + std::to_string(a.dim()) + " and " +
                    std::to_string(b.dim()) + " differ");
  }
}

}  // namespace

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return Operator(a.m_ - b.m_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return Operator(a.m_ * b.m_);
}

Operator operator*(double s, const Operator& a) { return Operator(s * a.m_); }

Operator commutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  Matrix ab = a.matrix() * b.matrix();
  Matrix ba = b.matrix() * a.matrix();
  return Operator(ab - ba);
}

bool is_self_adjoint(const InnerProduct& g, const Operator& a, double tol) {
  // <Au, v> = u^T A^T G v, so self-adjointness is G A = (G A)^T.
  const Matrix ga = g.gram() * a.matrix();
  const double scale = 1.0 + ga.cwiseAbs().maxCoeff();
  return (ga - ga.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

int SignedFrame::positive() const noexcept {
  return static_cast<int>(std::count(signs.begin(), signs.end(), 1));
}

SignedFrame gram_schmidt(const InnerProduct& g, std::span<const Vector> vectors, double tol) {
  if (vectors.empty()) {
    throw Error(ErrorKind::InvalidArgument, "gram_schmidt needs at least one vector");
  }
  const int m = g.dim();
  SignedFrame frame;
  frame.vectors.resize(m, static_cast<Eigen::Index>(vectors.size()));
  int done = 0;
  for (const Vector& v : vectors) {
    if (v.size() != m) {
      throw Error(ErrorKind::DimensionMismatch, "vector dimension does not match inner product");
    }
    Vector w = v;
    for (int j = 0; j < done; ++j) {
      const Vector y = frame.vectors.col(j);
      w -= frame.signs[j] * g(v, y) * y;
    }
    const double n = g.norm_sq(w);
    const double wn = w.squaredNorm();
    if (std::abs(n) <= tol * (1.0 + wn) || wn <= tol * v.squaredNorm()) {
      throw Error(ErrorKind::Degenerate,
                  "vector " + std::to_string(done + 1) +
                      " has a null or dependent projection (<w,w> = " + std::to_string(n) + ")");
    }
    frame.vectors.col(done) = w / std::sqrt(std::abs(n));
    frame.signs.push_back(n > 0 ? 1 : -1);
    ++done;
  }
  return frame;
}

SignedFrame gram_schmidt(const InnerProduct& g, const Matrix& columns, double tol) {
  std::vector<Vector> vs;
  vs.reserve(static_cast<std::size_t>(columns.cols()));
  for (Eigen::Index j = 0; j < columns.cols(); ++j) vs.emplace_back(columns.col(j));
  return gram_schmidt(g, vs, tol);
}

Subspace Subspace::span(const InnerProduct& g, const Matrix& basis_columns, double tol) {
  const int m = g.dim();
  const auto k = basis_columns.cols();
  if (basis_columns.rows() != m) {
    throw Error(ErrorKind::DimensionMismatch, "basis vectors do not match ambient dimension");
  }
  if (k < 1 || k > m) {
    throw Error(ErrorKind::InvalidArgument, "subspace dimension must lie in [1, m]");
  }
  if (!basis_columns.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "basis entries must be finite");
  }

  // Euclidean-orthonormal basis of the span first: the Gram matrix of Q is
  // then as well conditioned as the metric allows, whatever the input basis.
  Eigen::ColPivHouseholderQR<Matrix> qr(basis_columns);
  const double r0 = std::abs(qr.matrixR()(0, 0));
  if (r0 == 0.0) throw Error(ErrorKind::Degenerate, "zero basis vector");
  for (Eigen::Index j = 1; j < k; ++j) {
    if (std::abs(qr.matrixR()(j, j)) <= tol * r0) {
      throw Error(ErrorKind::Degenerate, "basis vectors are linearly dependent");
    }
  }
  const Matrix unit = qr.householderQ() * Matrix::Identity(m, k);

  // Congruence-diagonalize the Gram matrix; a vanishing eigenvalue is a null
  // direction.
  const Matrix gram = unit.transpose() * g.gram() * unit;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "Gram matrix eigensolver failed");
  }
  const Vector& lambda = es.eigenvalues();
  const double limit = tol * (1.0 + lambda.cwiseAbs().maxCoeff());

  SignedFrame frame;
  frame.vectors.resize(m, k);
  // Eigen sorts ascending; emit positive directions first.
  int col = 0;
  for (Eigen::Index i = k - 1; i >= 0; --i) {
    const double l = lambda(i);
    if (std::abs(l) <= limit) {
      throw Error(ErrorKind::Degenerate,
                  "subspace is degenerate (Gram eigenvalue " + std::to_string(l) + ")");
    }
    frame.vectors.col(col++) = unit * es.eigenvectors().col(i) / std::sqrt(std::abs(l));
    frame.signs.push_back(l > 0 ? 1 : -1);
  }
  return Subspace(g, basis_columns, std::move(frame));
}

Subspace Subspace::span(const InnerProduct& g, std::span<const Vector> basis, double tol) {
  Matrix cols(g.dim(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].size() != g.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "basis vectors do not match ambient dimension");
    }
    cols.col(static_cast<Eigen::Index>(j)) = basis[j];
  }
  return span(g, cols, tol);
}

Subspace Subspace::coordinate(const InnerProduct& g, std::span<const int> indices) {
  Matrix cols = Matrix::Zero(g.dim(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const int i = indices[j];
    if (i < 0 || i >= g.dim()) {
      throw Error(ErrorKind::IndexOutOfRange, "coordinate index " + std::to_string(i));
    }
    cols(i, static_cast<Eigen::Index>(j)) = 1.0;
  }
  return span(g, cols);
}

Matrix Subspace::signed_projector() const {
  const Vector eps = Eigen::Map<const Eigen::VectorXi>(frame_.signs.data(), frame_.size())
                         .cast<double>();
  return frame_.vectors * eps.asDiagonal() * frame_.vectors.transpose();
}

double Subspace::frame_norm_sq() const {
  return frame_.vectors.colwise().squaredNorm().maxCoeff();
}

Subspace orthogonal_complement(const Subspace& pi, double tol) {
  const InnerProduct& g = pi.ambient();
  const int m = g.dim();
  const int k = pi.dim();
  if (k < 1 || k > m - 1) {
    throw Error(ErrorKind::InvalidArgument, "complement needs 1 <= dim(pi) <= m-1");
  }
  // Kernel of v -> (<b_i, v>)_i, i.e. of B^T G.
  const Matrix constraints = pi.frame().vectors.transpose() * g.gram();
  Eigen::JacobiSVD<Matrix> svd(constraints, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  if (sv(k - 1) <= tol * sv(0)) {
    throw Error(ErrorKind::Degenerate, "subspace basis is numerically dependent");
  }
  return Subspace::span(g, Matrix(svd.matrixV().rightCols(m - k)), tol);
}

namespace {

// Small union-find over cluster indices.
struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<EigenCluster> eigenvalue_clusters(const Operator& a, double tol) {
  const Matrix& m = a.matrix();
  const int n = a.dim();
  if (!m.allFinite()) throw Error(ErrorKind::NumericalFailure, "operator is not finite");

  std::vector<std::complex<double>> values(static_cast<std::size_t>(n));
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym <= 1e-14 * (1.0 + m.cwiseAbs().maxCoeff())) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::NumericalFailure, "symmetric eigensolver did not converge");
    }
    for (int i = 0; i < n; ++i) values[i] = es.eigenvalues()(i);
  } else {
    Eigen::EigenSolver<Matrix> es(m, false);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::NumericalFailure, "eigensolver did not converge");
    }
    for (int i = 0; i < n; ++i) values[i] = es.eigenvalues()(i);
  }

  double radius = 0.0;
  for (const auto& v : values) radius = std::max(radius, std::abs(v));
  radius = tol * (1.0 + radius);

  DisjointSets sets(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= radius) sets.unite(i, j);
    }
  }

  std::vector<EigenCluster> clusters;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int root = sets.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(clusters.size());
      clusters.push_back({});
    }
    auto& c = clusters[static_cast<std::size_t>(slot[root])];
    c.value += values[i];
    ++c.multiplicity;
  }
  for (auto& c : clusters) {
    c.value /= static_cast<double>(c.multiplicity);
    if (std::abs(c.value.imag()) <= radius) c.value = {c.value.real(), 0.0};
  }
  std::sort(clusters.begin(), clusters.end(), [](const EigenCluster& x, const EigenCluster& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return clusters;
}

bool is_admissible(int p, int q, int r, int s) noexcept {
  return r >= 0 && r <= p && s >= 0 && s <= q && r + s >= 1 && r + s <= p + q - 1;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(base) ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

Vector random_normal_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

Subspace sample_grassmannian(const InnerProduct& g, int r, int s, std::uint64_t seed,
                             const SamplingOptions& opts) {
  if (!is_admissible(g.p(), g.q(), r, s)) {
    throw Error(ErrorKind::NotAdmissible, "(r,s) = (" + std::to_string(r) + "," +
                                              std::to_string(s) + ") is not admissible for (" +
                                              std::to_string(g.p()) + "," +
                                              std::to_string(g.q()) + ")");
  }
  std::mt19937_64 rng(seed);
  const int k = r + s;
  Matrix draws(g.dim(), k);
  for (int attempt = 0; attempt < opts.max_tries; ++attempt) {
    for (int j = 0; j < k; ++j) draws.col(j) = random_normal_vector(rng, g.dim());
    try {
      Subspace pi = Subspace::span(g, draws, opts.tol);
      if (pi.r() == r && pi.s() == s && pi.frame_norm_sq() <= opts.frame_norm_limit) return pi;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Degenerate) throw;
    }
  }
  throw Error(ErrorKind::ExhaustedTries,
              "no subspace of signature (" + std::to_string(r) + "," + std::to_string(s) +
                  ") after " + std::to_string(opts.max_tries) + " draws");
}

Vector sample_unit_vector(const InnerProduct& g, std::mt19937_64& rng,
                          const SamplingOptions& opts) {
  for (int attempt = 0; attempt < opts.max_tries; ++attempt) {
    const Vector v = random_normal_vector(rng, g.dim());
    const double n = g.norm_sq(v);
    const double e = v.squaredNorm();
    if (std::abs(n) <= opts.tol * (1.0 + e)) continue;
    if (e / std::abs(n) > opts.frame_norm_limit) continue;
    return v / std::sqrt(std::abs(n));
  }
  throw Error(ErrorKind::ExhaustedTries, "no admissible non-null vector drawn");
}

SignedFrame sample_orthonormal_frame(const InnerProduct& g, std::uint64_t seed,
                                     const SamplingOptions& opts) {
  std::mt19937_64 rng(seed);
  const int m = g.dim();
  Matrix draws(m, m);
  for (int attempt = 0; attempt < opts.max_tries; ++attempt) {
    for (int j = 0; j < m; ++j) draws.col(j) = random_normal_vector(rng, m);
    SignedFrame raw;
    try {
      raw = gram_schmidt(g, draws, opts.tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Degenerate) throw;
      continue;
    }
    if (raw.vectors.colwise().squaredNorm().maxCoeff() > opts.frame_norm_limit) continue;
    SignedFrame ordered;
    ordered.vectors.resize(m, m);
    int col = 0;
    for (int want : {1, -1}) {
      for (int j = 0; j < m; ++j) {
        if (raw.signs[j] != want) continue;
        ordered.vectors.col(col++) = raw.vectors.col(j);
        ordered.signs.push_back(want);
      }
    }
    return ordered;
  }
  throw Error(ErrorKind::ExhaustedTries, "no well-conditioned orthonormal frame drawn");
}

}  // namespace curvjac
