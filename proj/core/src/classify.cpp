#include "curvjac/classify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

namespace curvjac {

FlatCheck is_flat(const Model& model, double tol) {
  const double res = model.curvature().max_abs();
  return {res <= tol, res};
}

ConstantCurvatureCheck constant_curvature_check(const Model& model, double tol) {
  const int m = model.dim();
  ConstantCurvatureCheck out;
  if (m < 2) {
    // A line carries no curvature at all.
    out.kappa = 0.0;
    return out;
  }
  out.fitted = scalar_curvature(model) / (m * (m - 1.0));
  const CurvatureTensor diff =
      model.curvature() - out.fitted * constant_curvature_template(model.metric());
  out.residual = diff.frobenius_norm() / (1.0 + model.curvature().frobenius_norm());
  if (out.residual <= tol) out.kappa = out.fitted;
  return out;
}

EinsteinCheck einstein_check(const Model& model, double tol) {
  const int m = model.dim();
  const Operator rho = ricci_operator(model);
  EinsteinCheck out;
  out.fitted = rho.matrix().trace() / m;
  const Matrix diff = rho.matrix() - out.fitted * Matrix::Identity(m, m);
  out.residual = diff.norm() / (1.0 + rho.frobenius_norm());
  if (out.residual <= tol) out.lambda = out.fitted;
  return out;
}

namespace {

Matrix matrix_power(const Matrix& a, int k) {
  Matrix out = Matrix::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

}  // namespace

PseudoEinsteinCheck pseudo_einstein_check(const Operator& ricci, double tol) {
  PseudoEinsteinCheck out;
  out.clusters = eigenvalue_clusters(ricci, tol);
  const auto& c = out.clusters;
  if (c.size() == 1 && c[0].value.imag() == 0.0) {
    out.pseudo_einstein = true;
    return out;
  }
  if (c.size() == 2 && c[0].value.imag() != 0.0 && c[1].value.imag() != 0.0 &&
      c[0].multiplicity == c[1].multiplicity) {
    double spread = 0.0;
    for (const auto& x : c) spread = std::max(spread, std::abs(x.value));
    if (std::abs(c[0].value - std::conj(c[1].value)) <= tol * (1.0 + spread)) {
      out.pseudo_einstein = true;
      return out;
    }
  }

  const Matrix& rho = ricci.matrix();
  const int m = ricci.dim();
  const double asym = (rho - rho.transpose()).cwiseAbs().maxCoeff();
  if (asym <= 1e-14 * (1.0 + rho.cwiseAbs().maxCoeff())) return out;  // diagonalizable

  const double scale = 1.0 + rho.norm();
  const double a = rho.trace() / m;
  const Matrix shifted = rho - a * Matrix::Identity(m, m);
  if (matrix_power(shifted, m).norm() <= tol * std::pow(scale, m)) {
    out.pseudo_einstein = true;
    out.clusters = {{{a, 0.0}, m}};
    return out;
  }
  if (m % 2 == 0) {
    const Matrix sq = shifted * shifted;
    const double b2 = -sq.trace() / m;
    if (b2 > 0.0) {
      const Matrix q = sq + b2 * Matrix::Identity(m, m);
      if (matrix_power(q, m / 2).norm() <= tol * std::pow(scale, m)) {
        const double b = std::sqrt(b2);
        out.pseudo_einstein = true;
        out.clusters = {{{a, -b}, m / 2}, {{a, b}, m / 2}};
      }
    }
  }
  return out;
}

PuffiniVidevCheck puffini_videv_check(const Model& model, double tol) {
  const int m = model.dim();
  const Operator rho = ricci_operator(model);
  PuffiniVidevCheck out;
  PairWitness worst{0, 0, -1.0};
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const double res = normalized_commutator(polarized_jacobi(model, a, b), rho);
      if (res > worst.residual) worst = {a, b, res};
    }
  out.residual = std::max(worst.residual, 0.0);
  out.puffini_videv = out.residual <= tol;
  if (!out.puffini_videv) out.witness = worst;
  return out;
}

std::string_view to_string(SweepMode mode) noexcept {
  switch (mode) {
    case SweepMode::C1: return "c1";
    case SweepMode::C2: return "c2";
    case SweepMode::AllPairs: return "all_pairs";
    case SweepMode::OrthoPairs: return "ortho_pairs";
    case SweepMode::Grassmann: return "grassmann";
  }
  return "unknown";
}

namespace {

struct SampleOutcome {
  double residual = 0.0;
  Matrix vectors;
};

// J(span{X}) for a unit X (<X,X> = +-1).
Operator line_jacobi(const Model& model, const Vector& x) {
  return jacobi_contract(model, model.metric().norm_sq(x) * x * x.transpose());
}

Subspace sample_plane(const InnerProduct& g, std::mt19937_64& rng, const SamplingOptions& opts) {
  Matrix draws(g.dim(), 2);
  for (int attempt = 0; attempt < opts.max_tries; ++attempt) {
    draws.col(0) = random_normal_vector(rng, g.dim());
    draws.col(1) = random_normal_vector(rng, g.dim());
    try {
      Subspace alpha = Subspace::span(g, draws, opts.tol);
      if (alpha.frame_norm_sq() <= opts.frame_norm_limit) return alpha;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Degenerate) throw;
    }
  }
  throw Error(ErrorKind::ExhaustedTries, "no admissible 2-plane drawn");
}

Vector sample_orthogonal_unit(const InnerProduct& g, const Vector& x, std::mt19937_64& rng,
                              const SamplingOptions& opts) {
  const double ex = g.norm_sq(x);
  for (int attempt = 0; attempt < opts.max_tries; ++attempt) {
    Vector y = random_normal_vector(rng, g.dim());
    y -= (g(y, x) / ex) * x;
    const double n = g.norm_sq(y);
    const double e = y.squaredNorm();
    if (std::abs(n) <= opts.tol * (1.0 + e) || e / std::abs(n) > opts.frame_norm_limit) continue;
    return y / std::sqrt(std::abs(n));
  }
  throw Error(ErrorKind::ExhaustedTries, "no admissible orthogonal vector drawn");
}

SampleOutcome run_sample(const Model& model, const SweepRequest& req, std::uint64_t seed) {
  const InnerProduct& g = model.metric();
  std::mt19937_64 rng(seed);
  switch (req.mode) {
    case SweepMode::C1: {
      const Vector x = sample_unit_vector(g, rng, req.sampling);
      const Subspace line = Subspace::span(g, Matrix(x));
      return {commute_residual(model, line, orthogonal_complement(line)), Matrix(x)};
    }
    case SweepMode::C2: {
      const Subspace alpha = sample_plane(g, rng, req.sampling);
      return {commute_residual(model, alpha, orthogonal_complement(alpha)), alpha.basis()};
    }
    case SweepMode::AllPairs: {
      const Vector x = sample_unit_vector(g, rng, req.sampling);
      const Vector y = sample_unit_vector(g, rng, req.sampling);
      Matrix xy(g.dim(), 2);
      xy << x, y;
      return {normalized_commutator(line_jacobi(model, x), line_jacobi(model, y)), xy};
    }
    case SweepMode::OrthoPairs: {
      const Vector x = sample_unit_vector(g, rng, req.sampling);
      const Vector y = sample_orthogonal_unit(g, x, rng, req.sampling);
      Matrix xy(g.dim(), 2);
      xy << x, y;
      return {normalized_commutator(line_jacobi(model, x), line_jacobi(model, y)), xy};
    }
    case SweepMode::Grassmann: {
      const Subspace pi = sample_grassmannian(g, req.r, req.s, seed, req.sampling);
      return {commute_residual(model, pi, orthogonal_complement(pi)), pi.basis()};
    }
  }
  return {};
}

template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SweepResult sweep_commutation(const Model& model, const SweepRequest& req) {
  const InnerProduct& g = model.metric();
  const int m = g.dim();
  if (req.samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  switch (req.mode) {
    case SweepMode::C1:
    case SweepMode::AllPairs:
    case SweepMode::OrthoPairs:
      if (m < 2) throw Error(ErrorKind::InvalidArgument, "sweep needs dimension >= 2");
      break;
    case SweepMode::C2:
      if (m < 3) throw Error(ErrorKind::InvalidArgument, "(C2) sweep needs dimension >= 3");
      break;
    case SweepMode::Grassmann:
      if (!is_admissible(g.p(), g.q(), req.r, req.s)) {
        throw Error(ErrorKind::NotAdmissible, "(r,s) not admissible for this signature");
      }
      break;
  }

  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(req.samples));
  parallel_for(req.samples, req.threads, [&](int i) {
    outcomes[static_cast<std::size_t>(i)] =
        run_sample(model, req, derive_seed(req.seed, static_cast<std::uint64_t>(i)));
  });

  SweepResult out;
  out.samples = req.samples;
  for (int i = 0; i < req.samples; ++i) {
    auto& o = outcomes[static_cast<std::size_t>(i)];
    out.max_residual = std::max(out.max_residual, o.residual);
    if (o.residual > req.tol && !out.witness) {
      out.witness = SweepWitness{i, o.residual, std::move(o.vectors)};
    }
  }
  out.holds = !out.witness.has_value();
  return out;
}

ClassificationReport classify(const Model& model, const ClassifyOptions& options) {
  const double tol = options.tol;
  ClassificationReport rep;
  rep.config = options;
  rep.metric = model.metric();
  rep.validation = validate_curvature(model.curvature(), tol);
  rep.flat = is_flat(model, tol);
  rep.constant_curvature = constant_curvature_check(model, tol);
  rep.einstein = einstein_check(model, tol);
  rep.scalar_curvature = scalar_curvature(model);
  rep.pseudo_einstein = pseudo_einstein_check(ricci_operator(model), tol);
  rep.puffini_videv = puffini_videv_check(model, tol);

  const int m = model.dim();
  std::uint64_t stream = 0;
  for (SweepMode mode : {SweepMode::C1, SweepMode::C2, SweepMode::OrthoPairs, SweepMode::AllPairs}) {
    ++stream;
    if (m < 2 || (mode == SweepMode::C2 && m < 3)) continue;
    SweepRequest req;
    req.mode = mode;
    req.samples = options.samples;
    req.seed = derive_seed(options.seed, stream);
    req.tol = tol;
    req.threads = options.threads;
    rep.sweeps.push_back({mode, sweep_commutation(model, req)});
  }
  rep.decomposition = decompose(model, tol);
  return rep;
}

}  // namespace curvjac
