#include "curvjac/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curvjac {

namespace {

std::string one_based(int i, int j, int k, int l) {
  return std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(k + 1) +
         std::to_string(l + 1);
}

void require_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument,
                "dimension " + std::to_string(dim) + " outside [1, " + std::to_string(kMaxDim) +
                    "]");
  }
}

}  // namespace

CurvatureTensor::CurvatureTensor(int dim) : dim_(dim) {
  require_dim(dim);
  c_.assign(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0);
}

CurvatureTensor::CurvatureTensor(int dim, std::vector<double> components)
    : dim_(dim), c_(std::move(components)) {
  require_dim(dim);
  if (c_.size() != static_cast<std::size_t>(dim) * dim * dim * dim) {
    throw Error(ErrorKind::DimensionMismatch, "component array must hold m^4 values");
  }
  for (double v : c_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "components must be finite");
  }
}

double CurvatureTensor::max_abs() const noexcept {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double CurvatureTensor::frobenius_norm() const noexcept {
  double acc = 0.0;
  for (double v : c_) acc += v * v;
  return std::sqrt(acc);
}

double CurvatureTensor::evaluate(const Vector& a, const Vector& b, const Vector& c,
                                 const Vector& d) const {
  const int m = dim_;
  if (a.size() != m || b.size() != m || c.size() != m || d.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "vector dimension does not match tensor");
  }
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    if (a(i) == 0.0) continue;
    for (int j = 0; j < m; ++j) {
      if (b(j) == 0.0) continue;
      double inner = 0.0;
      for (int k = 0; k < m; ++k) {
        if (c(k) == 0.0) continue;
        for (int l = 0; l < m; ++l) inner += (*this)(i, j, k, l) * c(k) * d(l);
      }
      acc += a(i) * b(j) * inner;
    }
  }
  return acc;
}

CurvatureTensor& CurvatureTensor::operator+=(const CurvatureTensor& other) {
  if (other.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "tensor dimensions differ");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

CurvatureTensor& CurvatureTensor::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

CurvatureTensor operator-(CurvatureTensor a, const CurvatureTensor& b) {
  if (a.dim_ != b.dim_) throw Error(ErrorKind::DimensionMismatch, "tensor dimensions differ");
  for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
  return a;
}

std::string_view to_string(SymmetryProperty p) noexcept {
  switch (p) {
    case SymmetryProperty::AntisymmetryFirstPair: return "antisymmetry_first_pair";
    case SymmetryProperty::AntisymmetrySecondPair: return "antisymmetry_second_pair";
    case SymmetryProperty::FirstBianchi: return "first_bianchi";
    case SymmetryProperty::PairExchange: return "pair_exchange";
  }
  return "unknown";
}

ValidationReport validate_curvature(const CurvatureTensor& r, double tol) {
  const int m = r.dim();
  ValidationReport report;
  report.threshold = tol * (1.0 + r.max_abs());
  report.worst.residual = -1.0;

  auto residual = [&](SymmetryProperty prop, int i, int j, int k, int l) {
    switch (prop) {
      case SymmetryProperty::AntisymmetryFirstPair: return r(i, j, k, l) + r(j, i, k, l);
      case SymmetryProperty::AntisymmetrySecondPair: return r(i, j, k, l) + r(i, j, l, k);
      case SymmetryProperty::FirstBianchi: return r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l);
      case SymmetryProperty::PairExchange: return r(i, j, k, l) - r(k, l, i, j);
    }
    return 0.0;
  };

  for (auto prop : {SymmetryProperty::AntisymmetryFirstPair,
                    SymmetryProperty::AntisymmetrySecondPair, SymmetryProperty::FirstBianchi,
                    SymmetryProperty::PairExchange}) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            const double res = std::abs(residual(prop, i, j, k, l));
            if (res > report.worst.residual) report.worst = {prop, {i, j, k, l}, res};
          }
  }
  report.pass = report.worst.residual <= report.threshold;
  return report;
}

Model::Model(InnerProduct metric, CurvatureTensor curvature, double tol)
    : g_(metric), r_(std::move(curvature)) {
  if (r_.dim() != g_.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "curvature and metric dimensions differ");
  }
  const ValidationReport v = validate_curvature(r_, tol);
  if (!v.pass) {
    const auto& w = v.worst;
    throw Error(ErrorKind::BianchiViolation,
                std::string(to_string(w.property)) + " violated at R_" +
                    one_based(w.indices[0], w.indices[1], w.indices[2], w.indices[3]) +
                    " (residual " + std::to_string(w.residual) + ")");
  }
}

Model curvature_from_entries(const InnerProduct& g, std::span<const CurvatureEntry> entries,
                             double tol) {
  const int m = g.dim();
  CurvatureTensor r(m);
  std::vector<char> assigned(r.size(), 0);
  std::vector<double> value(r.size(), 0.0);

  auto index_of = [m](int i, int j, int k, int l) {
    return ((static_cast<std::size_t>(i) * m + j) * m + k) * m + l;
  };

  for (const CurvatureEntry& e : entries) {
    for (int idx : {e.i, e.j, e.k, e.l}) {
      if (idx < 1 || idx > m) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "entry R_" + one_based(e.i - 1, e.j - 1, e.k - 1, e.l - 1) +
                        " has an index outside 1.." + std::to_string(m));
      }
    }
    if (!std::isfinite(e.value)) {
      throw Error(ErrorKind::InvalidArgument, "entry value must be finite");
    }
    const int i = e.i - 1, j = e.j - 1, k = e.k - 1, l = e.l - 1;
    const struct {
      int a, b, c, d;
      double sign;
    } orbit[8] = {
        {i, j, k, l, 1.0},  {j, i, k, l, -1.0}, {i, j, l, k, -1.0}, {j, i, l, k, 1.0},
        {k, l, i, j, 1.0},  {l, k, i, j, -1.0}, {k, l, j, i, -1.0}, {l, k, j, i, 1.0},
    };
    for (const auto& o : orbit) {
      const std::size_t at = index_of(o.a, o.b, o.c, o.d);
      const double v = o.sign * e.value;
      if (assigned[at] && std::abs(value[at] - v) > tol * (1.0 + std::abs(e.value))) {
        throw Error(ErrorKind::ConflictingEntries,
                    "orbit of R_" + one_based(i, j, k, l) + " forces R_" +
                        one_based(o.a, o.b, o.c, o.d) + " = " + std::to_string(v) +
                        " but it was assigned " + std::to_string(value[at]));
      }
      assigned[at] = 1;
      value[at] = v;
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) r(i, j, k, l) = value[index_of(i, j, k, l)];
  return Model(g, std::move(r), tol);
}

std::vector<CurvatureEntry> orbit_representatives(const CurvatureTensor& r, double zero) {
  const int m = r.dim();
  std::vector<CurvatureEntry> out;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = k + 1; l < m; ++l) {
          if (k < i || (k == i && l < j)) continue;
          const double v = r(i, j, k, l);
          if (std::abs(v) > zero) out.push_back({i + 1, j + 1, k + 1, l + 1, v});
        }
  return out;
}

CurvatureTensor constant_curvature_template(const InnerProduct& g) {
  const int m = g.dim();
  CurvatureTensor r(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      // Only g_jk g_il (k=j, l=i) and g_ik g_jl (k=i, l=j) survive.
      const double e = g.sign(i) * g.sign(j);
      r(i, j, j, i) += e;
      r(i, j, i, j) -= e;
    }
  return r;
}

Matrix ricci_form(const Model& model) {
  const int m = model.dim();
  const auto& r = model.curvature();
  const auto& g = model.metric();
  Matrix rho = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += g.sign(k) * r(k, i, j, k);
      rho(i, j) = acc;
    }
  return rho;
}

Operator ricci_operator(const Model& model) {
  return Operator(model.metric().signs().asDiagonal() * ricci_form(model));
}

double scalar_curvature(const Model& model) { return ricci_operator(model).matrix().trace(); }

double sectional_curvature(const Model& model, const Vector& x, const Vector& y, double tol) {
  const auto& g = model.metric();
  const double gxx = g(x, x), gyy = g(y, y), gxy = g(x, y);
  const double den = gxx * gyy - gxy * gxy;
  if (std::abs(den) <= tol * (1.0 + x.squaredNorm() * y.squaredNorm())) {
    throw Error(ErrorKind::Degenerate, "plane is degenerate or vectors are dependent");
  }
  return model.curvature().evaluate(x, y, y, x) / den;
}

double sectional_curvature(const Model& model, const Subspace& plane) {
  if (plane.dim() != 2) {
    throw Error(ErrorKind::InvalidArgument, "sectional curvature needs a 2-plane");
  }
  if (plane.ambient() != model.metric()) {
    throw Error(ErrorKind::DimensionMismatch, "plane lives in a different space");
  }
  const auto& f = plane.frame();
  const Vector x = f.column(0), y = f.column(1);
  return model.curvature().evaluate(x, y, y, x) / (f.signs[0] * f.signs[1]);
}

std::vector<std::vector<int>> direct_sum_layout(std::span<const InnerProduct> blocks) {
  int positives = 0;
  for (const auto& b : blocks) positives += b.p();
  std::vector<std::vector<int>> layout;
  int next_pos = 0, next_neg = positives;
  for (const auto& b : blocks) {
    std::vector<int> map;
    for (int i = 0; i < b.p(); ++i) map.push_back(next_pos++);
    for (int i = 0; i < b.q(); ++i) map.push_back(next_neg++);
    layout.push_back(std::move(map));
  }
  return layout;
}

Model direct_sum(std::span<const Model> blocks) {
  if (blocks.empty()) throw Error(ErrorKind::InvalidArgument, "direct sum needs a block");
  std::vector<InnerProduct> metrics;
  int p = 0, q = 0;
  for (const auto& b : blocks) {
    metrics.push_back(b.metric());
    p += b.metric().p();
    q += b.metric().q();
  }
  const auto layout = direct_sum_layout(metrics);
  CurvatureTensor r(p + q);
  for (std::size_t n = 0; n < blocks.size(); ++n) {
    const auto& br = blocks[n].curvature();
    const auto& map = layout[n];
    const int bm = br.dim();
    for (int i = 0; i < bm; ++i)
      for (int j = 0; j < bm; ++j)
        for (int k = 0; k < bm; ++k)
          for (int l = 0; l < bm; ++l) r(map[i], map[j], map[k], map[l]) = br(i, j, k, l);
  }
  return Model(InnerProduct(p, q), std::move(r));
}

CurvatureTensor pullback(const CurvatureTensor& r, const Matrix& frame) {
  const int m = r.dim();
  if (frame.rows() != m) throw Error(ErrorKind::DimensionMismatch, "frame rows must equal m");
  const int k = static_cast<int>(frame.cols());
  // Contract one slot at a time: cost O(m^4 k) per slot.
  const auto idx = [](int a, int b, int c, int d, int n1, int n2, int n3) {
    return ((static_cast<std::size_t>(a) * n1 + b) * n2 + c) * n3 + d;
  };
  std::vector<double> t1(static_cast<std::size_t>(k) * m * m * m, 0.0);
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < m; ++i) {
      const double f = frame(i, a);
      if (f == 0.0) continue;
      for (int j = 0; j < m; ++j)
        for (int kk = 0; kk < m; ++kk)
          for (int l = 0; l < m; ++l) t1[idx(a, j, kk, l, m, m, m)] += f * r(i, j, kk, l);
    }
  std::vector<double> t2(static_cast<std::size_t>(k) * k * m * m, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int j = 0; j < m; ++j) {
        const double f = frame(j, b);
        if (f == 0.0) continue;
        for (int kk = 0; kk < m; ++kk)
          for (int l = 0; l < m; ++l) t2[idx(a, b, kk, l, k, m, m)] += f * t1[idx(a, j, kk, l, m, m, m)];
      }
  std::vector<double> t3(static_cast<std::size_t>(k) * k * k * m, 0.0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int kk = 0; kk < m; ++kk) {
          const double f = frame(kk, c);
          if (f == 0.0) continue;
          for (int l = 0; l < m; ++l) t3[idx(a, b, c, l, k, k, m)] += f * t2[idx(a, b, kk, l, k, m, m)];
        }
  CurvatureTensor out(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) {
          double acc = 0.0;
          for (int l = 0; l < m; ++l) acc += frame(l, d) * t3[idx(a, b, c, l, k, k, m)];
          out(a, b, c, d) = acc;
        }
  return out;
}

Model conjugate_basis(const Model& model, const SignedFrame& frame, double tol) {
  const auto& g = model.metric();
  const int m = g.dim();
  if (frame.vectors.rows() != m || frame.vectors.cols() != m || frame.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "frame must contain m vectors of dimension m");
  }
  for (int i = 0; i < m; ++i) {
    if (frame.signs[i] != static_cast<int>(g.sign(i))) {
      throw Error(ErrorKind::SignatureChanged,
                  "frame sign pattern does not match the canonical signature");
    }
  }
  const Matrix gram = frame.vectors.transpose() * g.gram() * frame.vectors;
  const double scale = 1.0 + frame.vectors.colwise().squaredNorm().maxCoeff();
  if ((gram - g.gram()).cwiseAbs().maxCoeff() > tol * scale) {
    throw Error(ErrorKind::FrameNotOrthonormal, "frame is not g-orthonormal");
  }
  return Model(g, pullback(model.curvature(), frame.vectors), tol);
}

}  // namespace curvjac
