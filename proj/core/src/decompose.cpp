#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "curvjac/classify.hpp"

namespace curvjac {

namespace {

// A candidate block: basis columns in canonical coordinates.
struct Piece {
  Matrix basis;
  bool best_effort = false;
  bool flat = false;
};

struct Labels {
  std::vector<int> parent;
  explicit Labels(int n) : parent(static_cast<std::size_t>(n)) {
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

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0) return b;
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

// Right null space of `a` with a known dimension: the `dim` right singular
// vectors belonging to the smallest singular values.
Matrix known_kernel(const Matrix& a, int dim) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(dim);
}

Matrix matrix_power(const Matrix& a, int k) {
  Matrix out = Matrix::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

// Euclidean-orthonormal basis of {u : R(u, ., ., .) = 0}.
Matrix curvature_kernel(const CurvatureTensor& r, double tol) {
  const int m = r.dim();
  const auto c = r.components();
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      rows(c.data(), m, static_cast<Eigen::Index>(m) * m * m);
  Eigen::JacobiSVD<Matrix> svd(Matrix(rows.transpose()), Eigen::ComputeFullV);
  const double thr = tol * (1.0 + r.max_abs());
  int k = 0;
  while (k < m && svd.singularValues()(m - 1 - k) <= thr) ++k;
  return svd.matrixV().rightCols(k);
}

// Ricci eigenspace clusters of rho restricted to the invariant subspace with
// signed orthonormal frame `frame`.
std::vector<Piece> ricci_pieces(const Model& model, const SignedFrame& frame, double tol) {
  const InnerProduct& g = model.metric();
  const int k = frame.size();
  const Matrix& f = frame.vectors;
  const Vector eps = Eigen::Map<const Eigen::VectorXi>(frame.signs.data(), k).cast<double>();
  const Matrix rho = eps.asDiagonal() * f.transpose() * g.gram() *
                     ricci_operator(model).matrix() * f;
  std::vector<Piece> pieces;

  if (g.is_riemannian()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.transpose()));
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::NumericalFailure, "Ricci eigensolver did not converge");
    }
    const Vector& ev = es.eigenvalues();
    const double radius = tol * (1.0 + ev.cwiseAbs().maxCoeff());
    int start = 0;
    for (int i = 1; i <= k; ++i) {
      if (i == k || ev(i) - ev(i - 1) > radius) {
        pieces.push_back({f * es.eigenvectors().middleCols(start, i - start)});
        start = i;
      }
    }
    return pieces;
  }

  Eigen::EigenSolver<Matrix> es(rho, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "Ricci eigensolver did not converge");
  }
  std::vector<std::complex<double>> ev(static_cast<std::size_t>(k));
  double spectral = 0.0;
  for (int i = 0; i < k; ++i) {
    ev[i] = es.eigenvalues()(i);
    spectral = std::max(spectral, std::abs(ev[i]));
  }
  // Defective eigenvalues scatter by O(eps^(1/size)); the cluster mean is
  // still accurate because traces are well conditioned.
  const double radius = std::sqrt(tol) * (1.0 + spectral);
  Labels sets(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(ev[i] - ev[j]) <= radius) sets.unite(i, j);

  struct Cluster {
    std::complex<double> mean;
    int mult = 0;
    bool used = false;
  };
  std::vector<Cluster> clusters;
  std::vector<int> slot(static_cast<std::size_t>(k), -1);
  for (int i = 0; i < k; ++i) {
    const int root = sets.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(clusters.size());
      clusters.push_back({});
    }
    clusters[slot[root]].mean += ev[i];
    ++clusters[slot[root]].mult;
  }
  for (auto& c : clusters) c.mean /= static_cast<double>(c.mult);
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (a.mean.real() != b.mean.real()) return a.mean.real() < b.mean.real();
    return a.mean.imag() < b.mean.imag();
  });

  const Matrix id = Matrix::Identity(k, k);
  for (auto& c : clusters) {
    if (c.used) continue;
    c.used = true;
    if (std::abs(c.mean.imag()) <= radius) {
      const Matrix shifted = rho - c.mean.real() * id;
      pieces.push_back({f * known_kernel(matrix_power(shifted, c.mult), c.mult)});
      continue;
    }
    // Pair with the conjugate cluster into one real invariant subspace.
    auto partner = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& o) {
      return !o.used && o.mult == c.mult && std::abs(o.mean - std::conj(c.mean)) <= radius;
    });
    if (partner == clusters.end()) {
      pieces.push_back({Matrix(), true});
      continue;
    }
    partner->used = true;
    const double a = 0.5 * (c.mean.real() + partner->mean.real());
    const double b = 0.5 * (std::abs(c.mean.imag()) + std::abs(partner->mean.imag()));
    const Matrix shifted = rho - a * id;
    const Matrix q = shifted * shifted + b * b * id;
    pieces.push_back({f * known_kernel(matrix_power(q, c.mult), 2 * c.mult)});
  }

  // Unpaired complex clusters cannot be separated over the reals; hand the
  // whole subspace back as one best-effort piece.
  const bool unpaired = std::any_of(pieces.begin(), pieces.end(),
                                    [](const Piece& p) { return p.basis.cols() == 0; });
  if (unpaired) return {Piece{f, true}};
  return pieces;
}

// Union pieces whose frames are coupled by a curvature component.
std::vector<Piece> merge_coupled(const Model& model, std::vector<Piece> pieces, double tol,
                                 double* cross_residual) {
  const InnerProduct& g = model.metric();
  const int n = static_cast<int>(pieces.size());
  Matrix frames(g.dim(), 0);
  std::vector<int> label;
  for (int i = 0; i < n; ++i) {
    const Subspace sub = Subspace::span(g, pieces[i].basis);
    frames = hcat(frames, sub.frame().vectors);
    for (int c = 0; c < sub.dim(); ++c) label.push_back(i);
  }
  const CurvatureTensor adapted = pullback(model.curvature(), frames);
  const int m = adapted.dim();
  const double thr = tol * (1.0 + adapted.max_abs());
  Labels sets(n);
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          const int la = label[a], lb = label[b], lc = label[c], ld = label[d];
          if (la == lb && lb == lc && lc == ld) continue;
          const double v = std::abs(adapted(a, b, c, d));
          worst = std::max(worst, v);
          if (v > thr) {
            sets.unite(la, lb);
            sets.unite(la, lc);
            sets.unite(la, ld);
          }
        }
  if (cross_residual) *cross_residual = worst / (1.0 + adapted.max_abs());

  std::vector<Piece> merged;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int root = sets.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(merged.size());
      merged.push_back({Matrix(g.dim(), 0), false, true});
    }
    Piece& target = merged[slot[root]];
    target.basis = hcat(target.basis, pieces[i].basis);
    target.best_effort = target.best_effort || pieces[i].best_effort;
    target.flat = target.flat && pieces[i].flat;
  }
  return merged;
}

// Merge degenerate pieces into the piece they pair with most strongly until
// every piece spans a non-degenerate subspace.
std::vector<Piece> repair_degenerate(const InnerProduct& g, std::vector<Piece> pieces) {
  for (;;) {
    int bad = -1;
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
      try {
        (void)Subspace::span(g, pieces[i].basis);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Degenerate) throw;
        bad = i;
        break;
      }
    }
    if (bad < 0 || pieces.size() == 1) return pieces;
    int best = -1;
    double coupling = -1.0;
    for (int j = 0; j < static_cast<int>(pieces.size()); ++j) {
      if (j == bad) continue;
      const double c = (pieces[bad].basis.transpose() * g.gram() * pieces[j].basis).norm();
      if (c > coupling) {
        coupling = c;
        best = j;
      }
    }
    pieces[best].basis = hcat(pieces[best].basis, pieces[bad].basis);
    pieces[best].best_effort = true;
    pieces[best].flat = false;
    pieces.erase(pieces.begin() + bad);
  }
}

// Split a Riemannian piece along the eigenspaces of a random symmetric
// element of the commutant of its curvature operators R(e_a, e_b).
std::vector<Piece> commutant_split(const Model& model, const Piece& piece, double tol,
                                   std::uint64_t seed) {
  const InnerProduct& g = model.metric();
  const Subspace sub = Subspace::span(g, piece.basis);
  const Matrix& f = sub.frame().vectors;
  const int k = sub.dim();
  if (k < 2) return {piece};
  const CurvatureTensor rb = pullback(model.curvature(), f);

  std::vector<std::pair<int, int>> params;
  for (int p = 0; p < k; ++p)
    for (int q = p; q < k; ++q) params.emplace_back(p, q);
  const int n = static_cast<int>(params.size());

  Matrix normal = Matrix::Zero(n, n);
  Matrix lin(k * k, n);
  Matrix op(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v) op(u, v) = rb(a, b, v, u);
      if (op.cwiseAbs().maxCoeff() == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        Matrix e = Matrix::Zero(k, k);
        e(params[c].first, params[c].second) = 1.0;
        e(params[c].second, params[c].first) = 1.0;
        const Matrix comm = e * op - op * e;
        lin.col(c) = Eigen::Map<const Vector>(comm.data(), k * k);
      }
      normal += lin.transpose() * lin;
    }

  Eigen::SelfAdjointEigenSolver<Matrix> es(normal);
  const double thr = tol * std::pow(1.0 + rb.max_abs(), 2);
  int null_dim = 0;
  while (null_dim < n && es.eigenvalues()(null_dim) <= thr) ++null_dim;
  if (null_dim <= 1) return {piece};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal_dist(0.0, 1.0);
  Vector coeff = Vector::Zero(n);
  for (int i = 0; i < null_dim; ++i) coeff += normal_dist(rng) * es.eigenvectors().col(i);
  Matrix t = Matrix::Zero(k, k);
  for (int c = 0; c < n; ++c) {
    t(params[c].first, params[c].second) = coeff(c);
    t(params[c].second, params[c].first) = coeff(c);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> ts(t);
  const Vector& tv = ts.eigenvalues();
  const double radius = std::sqrt(tol) * (1.0 + tv.cwiseAbs().maxCoeff());
  std::vector<Piece> out;
  int start = 0;
  for (int i = 1; i <= k; ++i) {
    if (i == k || tv(i) - tv(i - 1) > radius) {
      out.push_back({f * ts.eigenvectors().middleCols(start, i - start), piece.best_effort});
      start = i;
    }
  }
  return out;
}

}  // namespace

Decomposition decompose(const Model& model, double tol) {
  const InnerProduct& g = model.metric();
  const int m = g.dim();
  std::vector<Piece> pieces;
  bool best_effort = false;

  // Flat directions split off as 1-dimensional blocks.
  const Matrix kernel = curvature_kernel(model.curvature(), tol);
  SignedFrame rest;
  if (kernel.cols() == 0) {
    rest.vectors = Matrix::Identity(m, m);
    for (int i = 0; i < m; ++i) rest.signs.push_back(static_cast<int>(g.sign(i)));
  } else {
    std::optional<Subspace> flat;
    try {
      flat = Subspace::span(g, kernel);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Degenerate) throw;
    }
    if (!flat) {
      best_effort = true;
      rest.vectors = Matrix::Identity(m, m);
      for (int i = 0; i < m; ++i) rest.signs.push_back(static_cast<int>(g.sign(i)));
    } else {
      for (int i = 0; i < flat->dim(); ++i) {
        pieces.push_back({Matrix(flat->frame().vectors.col(i)), false, true});
      }
      if (flat->dim() < m) rest = orthogonal_complement(*flat, tol).frame();
    }
  }

  std::vector<Piece> curved;
  if (rest.size() > 0) {
    curved = repair_degenerate(g, ricci_pieces(model, rest, tol));
    curved = merge_coupled(model, std::move(curved), tol, nullptr);
    if (g.is_riemannian()) {
      std::vector<Piece> refined;
      std::uint64_t salt = 0;
      for (const Piece& p : curved) {
        for (Piece& q : commutant_split(model, p, tol, derive_seed(0x5eedULL, salt++))) {
          refined.push_back(std::move(q));
        }
      }
      curved = std::move(refined);
    }
  }
  for (Piece& p : curved) p.flat = false;
  curved.insert(curved.end(), std::make_move_iterator(pieces.begin()),
                std::make_move_iterator(pieces.end()));

  Decomposition out;
  curved = merge_coupled(model, std::move(curved), tol, &out.cross_residual);
  for (const Piece& p : curved) {
    const Subspace sub = Subspace::span(g, p.basis);
    DecompositionBlock block;
    block.signature = InnerProduct(sub.r(), sub.s());
    block.frame = sub.frame();
    block.best_effort = p.best_effort || best_effort;
    if (p.flat) {
      block.einstein = 0.0;
      block.pseudo_einstein = true;
      block.ricci_clusters = {{{0.0, 0.0}, block.dim()}};
    } else {
      const Model bm = block_model(model, block, tol);
      block.einstein = einstein_check(bm, tol).lambda;
      const PseudoEinsteinCheck pe = pseudo_einstein_check(ricci_operator(bm), tol);
      block.pseudo_einstein = pe.pseudo_einstein;
      block.ricci_clusters = pe.clusters;
    }
    out.best_effort = out.best_effort || block.best_effort;
    out.blocks.push_back(std::move(block));
  }
  return out;
}

Model block_model(const Model& model, const DecompositionBlock& block, double tol) {
  return Model(block.signature, pullback(model.curvature(), block.frame.vectors), tol);
}

SignedFrame adapted_frame(const Decomposition& d, const InnerProduct& g) {
  std::vector<InnerProduct> sigs;
  for (const auto& b : d.blocks) sigs.push_back(b.signature);
  const auto layout = direct_sum_layout(sigs);
  SignedFrame out;
  out.vectors = Matrix::Zero(g.dim(), g.dim());
  out.signs.assign(static_cast<std::size_t>(g.dim()), 0);
  for (std::size_t n = 0; n < d.blocks.size(); ++n) {
    const auto& f = d.blocks[n].frame;
    for (int i = 0; i < f.size(); ++i) {
      out.vectors.col(layout[n][i]) = f.vectors.col(i);
      out.signs[layout[n][i]] = f.signs[i];
    }
  }
  return out;
}

}  // namespace curvjac
