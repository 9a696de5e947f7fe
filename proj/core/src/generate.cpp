#include "curvjac/generate.hpp"

#include <cmath>
#include <random>
#include <string>

namespace curvjac {

std::string_view to_string(GeneratorKind kind) noexcept {
  switch (kind) {
    case GeneratorKind::Flat: return "flat";
    case GeneratorKind::Constant: return "constant";
    case GeneratorKind::RPhi: return "r_phi";
    case GeneratorKind::RandomAcurv: return "random_acurv";
    case GeneratorKind::ComplexSpaceForm: return "complex_space_form";
    case GeneratorKind::DirectSum: return "direct_sum";
  }
  return "unknown";
}

std::optional<GeneratorKind> generator_kind_from_string(std::string_view name) noexcept {
  for (auto k : {GeneratorKind::Flat, GeneratorKind::Constant, GeneratorKind::RPhi,
                 GeneratorKind::RandomAcurv, GeneratorKind::ComplexSpaceForm,
                 GeneratorKind::DirectSum}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Model gen_flat(const InnerProduct& g) { return Model(g, CurvatureTensor(g.dim())); }

Model gen_constant(const InnerProduct& g, double kappa) {
  if (!std::isfinite(kappa)) throw Error(ErrorKind::InvalidArgument, "kappa must be finite");
  return Model(g, kappa * constant_curvature_template(g));
}

namespace {

CurvatureTensor r_phi_tensor(const Matrix& phi) {
  const int m = static_cast<int>(phi.rows());
  CurvatureTensor r(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) r(i, j, k, l) = phi(j, k) * phi(i, l) - phi(i, k) * phi(j, l);
  return r;
}

}  // namespace

Model gen_r_phi(const InnerProduct& g, const Matrix& phi) {
  if (phi.rows() != g.dim() || phi.cols() != g.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "phi must be m x m");
  }
  if (!phi.allFinite()) throw Error(ErrorKind::InvalidArgument, "phi must be finite");
  const double scale = 1.0 + phi.cwiseAbs().maxCoeff();
  if ((phi - phi.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::NotSymmetric, "phi is not symmetric");
  }
  return Model(g, r_phi_tensor(0.5 * (phi + phi.transpose())));
}

Model gen_random_acurv(const InnerProduct& g, int terms, std::uint64_t seed) {
  if (terms < 1) throw Error(ErrorKind::InvalidArgument, "terms must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int m = g.dim();
  CurvatureTensor r(m);
  for (int t = 0; t < terms; ++t) {
    Matrix a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = normal(rng);
    r += r_phi_tensor(0.5 * (a + a.transpose()));
  }
  return Model(g, std::move(r));
}

Model gen_complex_space_form(double kappa) {
  if (!std::isfinite(kappa)) throw Error(ErrorKind::InvalidArgument, "kappa must be finite");
  const InnerProduct g = InnerProduct::riemannian(4);
  Matrix j = Matrix::Zero(4, 4);
  j(1, 0) = 1.0;
  j(0, 1) = -1.0;
  j(3, 2) = 1.0;
  j(2, 3) = -1.0;
  // jg(a, b) = g(J e_a, e_b)
  const Matrix jg = j.transpose();
  const Matrix id = Matrix::Identity(4, 4);
  CurvatureTensor r(4);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z)
        for (int w = 0; w < 4; ++w) {
          const double v = id(y, z) * id(x, w) - id(x, z) * id(y, w) + jg(y, z) * jg(x, w) -
                           jg(x, z) * jg(y, w) - 2.0 * jg(x, y) * jg(z, w);
          r(x, y, z, w) = 0.25 * kappa * v;
        }
  return Model(g, std::move(r));
}

namespace {

std::optional<double> einstein_constant(const Model& model) {
  const Operator rho = ricci_operator(model);
  const double lambda = rho.matrix().trace() / model.dim();
  const Matrix diff = rho.matrix() - lambda * Matrix::Identity(model.dim(), model.dim());
  if (diff.norm() <= kDefaultTol * (1.0 + rho.frobenius_norm())) return lambda;
  return std::nullopt;
}

}  // namespace

GeneratedModel gen_direct_sum(std::span<const GeneratorSpec> children, bool rotate,
                              std::uint64_t seed) {
  if (children.empty()) throw Error(ErrorKind::InvalidArgument, "direct sum needs children");
  std::vector<Model> models;
  std::vector<InnerProduct> metrics;
  for (const auto& child : children) {
    GeneratedModel gm = generate(child);
    metrics.push_back(gm.model.metric());
    models.push_back(std::move(gm.model));
  }
  Model sum = direct_sum(models);
  const int m = sum.dim();
  const auto layout = direct_sum_layout(metrics);

  // Coordinates change by c_new = F^-1 c_old with F^-1 = E F^T G.
  Matrix to_new = Matrix::Identity(m, m);
  if (rotate) {
    const SignedFrame frame = sample_orthonormal_frame(sum.metric(), seed);
    sum = conjugate_basis(sum, frame);
    to_new = sum.metric().gram() * frame.vectors.transpose() * sum.metric().gram();
  }

  GeneratedModel out{std::move(sum), {}};
  for (std::size_t n = 0; n < models.size(); ++n) {
    GeneratedBlock block{metrics[n], Matrix(m, metrics[n].dim()), einstein_constant(models[n])};
    for (int i = 0; i < metrics[n].dim(); ++i) block.basis.col(i) = to_new.col(layout[n][i]);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

GeneratedModel generate(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorKind::DirectSum) {
    return gen_direct_sum(spec.children, spec.rotate, spec.seed);
  }
  const InnerProduct g(spec.p, spec.q);
  auto single = [&](Model model) {
    GeneratedBlock block{g, Matrix::Identity(g.dim(), g.dim()), einstein_constant(model)};
    return GeneratedModel{std::move(model), {std::move(block)}};
  };
  switch (spec.kind) {
    case GeneratorKind::Flat: return single(gen_flat(g));
    case GeneratorKind::Constant: return single(gen_constant(g, spec.kappa));
    case GeneratorKind::RPhi: return single(gen_r_phi(g, spec.phi));
    case GeneratorKind::RandomAcurv: return single(gen_random_acurv(g, spec.terms, spec.seed));
    case GeneratorKind::ComplexSpaceForm:
      if (spec.p != 4 || spec.q != 0) {
        throw Error(ErrorKind::InvalidArgument, "complex space form is defined on (4,0) only");
      }
      return single(gen_complex_space_form(spec.kappa));
    case GeneratorKind::DirectSum: break;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown generator kind");
}

Matrix phi_nilpotent_shift(const InnerProduct& g, double c) {
  if (g.p() < 1 || g.q() < 1) {
    throw Error(ErrorKind::InvalidArgument, "nilpotent shift needs an indefinite signature");
  }
  Matrix phi = c * g.gram();
  const int s = 0, t = g.p();
  phi(s, s) += 1.0;
  phi(s, t) += 1.0;
  phi(t, s) += 1.0;
  phi(t, t) += 1.0;
  return phi;
}

Matrix phi_complex_pair(double a, double b) {
  const InnerProduct g(2, 2);
  Matrix phi = a * g.gram();
  // n pairs e1 with e3 and e2 with e4; g^-1 n squares to -I.
  for (auto [s, t] : {std::pair{0, 2}, std::pair{1, 3}}) {
    phi(s, t) += b;
    phi(t, s) += b;
  }
  return phi;
}

}  // namespace curvjac
