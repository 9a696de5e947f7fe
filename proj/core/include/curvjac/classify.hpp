#pragma once

// Classification predicates, commutation sweeps and the block decomposition.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "curvjac/jacobi.hpp"

namespace curvjac {

struct FlatCheck {
  bool flat = false;
  double residual = 0.0;  // max |R_ijkl|
};

FlatCheck is_flat(const Model& model, double tol = kDefaultTol);

struct ConstantCurvatureCheck {
  std::optional<double> kappa;
  double fitted = 0.0;    // tau / (m (m-1)), reported even when the fit fails
  double residual = 0.0;  // |R - kappa R_g|_F / (1 + |R|_F)
};

ConstantCurvatureCheck constant_curvature_check(const Model& model, double tol = kDefaultTol);

struct EinsteinCheck {
  std::optional<double> lambda;
  double fitted = 0.0;    // tau / m
  double residual = 0.0;  // |rho - lambda I|_F / (1 + |rho|_F)
};

EinsteinCheck einstein_check(const Model& model, double tol = kDefaultTol);

struct PseudoEinsteinCheck {
  bool pseudo_einstein = false;
  std::vector<EigenCluster> clusters;
};

/// One real eigenvalue, or exactly one conjugate pair. A non-symmetric rho
/// whose spectrum splits under the clustering radius (defective eigenvalues
/// move by O(eps^(1/k))) is also tested by nilpotency of rho - a I, resp.
/// (rho - a I)^2 + b^2 I; when that succeeds the merged clusters are reported.
PseudoEinsteinCheck pseudo_einstein_check(const Operator& ricci, double tol = kDefaultTol);

struct PairWitness {
  int a = 0;  // 0-based basis indices
  int b = 0;
  double residual = 0.0;
};

struct PuffiniVidevCheck {
  bool puffini_videv = false;
  double residual = 0.0;  // max over a <= b of |[B(e_a,e_b), rho]| normalized
  std::optional<PairWitness> witness;
};

/// [J(pi), rho] = 0 for all non-degenerate pi, discharged through the
/// polarized Jacobi forms B(e_a, e_b), a <= b, which span every J(pi).
PuffiniVidevCheck puffini_videv_check(const Model& model, double tol = kDefaultTol);

enum class SweepMode { C1, C2, AllPairs, OrthoPairs, Grassmann };

std::string_view to_string(SweepMode mode) noexcept;

struct SweepRequest {
  SweepMode mode = SweepMode::C1;
  int r = 0;  // Grassmann only
  int s = 0;
  int samples = 256;
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
  /// 0 = hardware concurrency. Results do not depend on this value.
  int threads = 1;
  SamplingOptions sampling{};
};

struct SweepWitness {
  int sample = 0;
  double residual = 0.0;
  /// Sampled data: X (C1), [X Y] (pairs) or a basis of pi (C2, Grassmann).
  Matrix vectors;
};

struct SweepResult {
  bool holds = true;
  double max_residual = 0.0;
  int samples = 0;
  std::optional<SweepWitness> witness;  // first sample above tol
};

SweepResult sweep_commutation(const Model& model, const SweepRequest& request);

struct DecompositionBlock {
  InnerProduct signature{1, 0};
  /// Signed orthonormal frame of the block (spacelike vectors first), in
  /// canonical coordinates of the decomposed model.
  SignedFrame frame;
  std::optional<double> einstein;
  bool pseudo_einstein = false;
  std::vector<EigenCluster> ricci_clusters;
  bool best_effort = false;

  int dim() const noexcept { return signature.dim(); }
};

struct Decomposition {
  std::vector<DecompositionBlock> blocks;
  bool best_effort = false;
  /// Largest curvature component mixing two blocks in the adapted frame,
  /// relative to 1 + max|R|.
  double cross_residual = 0.0;
};

/// Orthogonal splitting of the model into curvature blocks: flat directions,
/// Ricci eigenspace clusters merged along curvature coupling, and (Riemannian
/// signature) a further split along the commutant of the curvature operators.
Decomposition decompose(const Model& model, double tol = kDefaultTol);

/// Curvature restricted to a block, expressed in the block frame.
Model block_model(const Model& model, const DecompositionBlock& block, double tol = kDefaultTol);

/// Concatenated block frames ordered like direct_sum_layout, so that
/// conjugate_basis(model, adapted_frame(d)) matches direct_sum(block models).
SignedFrame adapted_frame(const Decomposition& d, const InnerProduct& g);

struct ClassifyOptions {
  double tol = kDefaultTol;
  int samples = 256;
  std::uint64_t seed = 42;
  int threads = 1;
};

struct NamedSweep {
  SweepMode mode = SweepMode::C1;
  SweepResult result;
};

struct ClassificationReport {
  ClassifyOptions config;
  InnerProduct metric{1, 0};
  ValidationReport validation;
  FlatCheck flat;
  ConstantCurvatureCheck constant_curvature;
  EinsteinCheck einstein;
  double scalar_curvature = 0.0;
  PseudoEinsteinCheck pseudo_einstein;
  PuffiniVidevCheck puffini_videv;
  std::vector<NamedSweep> sweeps;
  Decomposition decomposition;
};

ClassificationReport classify(const Model& model, const ClassifyOptions& options = {});

}  // namespace curvjac
