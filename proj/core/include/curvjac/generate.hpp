#pragma once

// Deterministic and seeded model generators.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "curvjac/curvature.hpp"

namespace curvjac {

enum class GeneratorKind { Flat, Constant, RPhi, RandomAcurv, ComplexSpaceForm, DirectSum };

std::string_view to_string(GeneratorKind kind) noexcept;
std::optional<GeneratorKind> generator_kind_from_string(std::string_view name) noexcept;

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Flat;
  int p = 0;
  int q = 0;
  double kappa = 0.0;
  Matrix phi;  // RPhi only
  int terms = 1;
  std::uint64_t seed = 0;
  std::vector<GeneratorSpec> children;  // DirectSum only
  bool rotate = false;

  int dim() const noexcept { return p + q; }
};

/// Ground truth for one summand of a generated direct sum.
struct GeneratedBlock {
  InnerProduct signature{1, 0};
  /// Columns span the block in the coordinates of the generated model.
  Matrix basis;
  std::optional<double> einstein;
};

struct GeneratedModel {
  Model model;
  std::vector<GeneratedBlock> blocks;
};

Model gen_flat(const InnerProduct& g);

/// R(i,j,k,l) = kappa (g_jk g_il - g_ik g_jl).
Model gen_constant(const InnerProduct& g, double kappa);

/// R(X,Y,Z,W) = phi(Y,Z) phi(X,W) - phi(X,Z) phi(Y,W). Throws NotSymmetric
/// when |phi - phi^T| exceeds 1e-12 relative.
Model gen_r_phi(const InnerProduct& g, const Matrix& phi);

/// Sum of `terms` R_phi tensors with phi = (A + A^T)/2, A standard normal.
Model gen_random_acurv(const InnerProduct& g, int terms, std::uint64_t seed);

/// Complex space form of holomorphic curvature kappa on (R^4, J) with
/// J e1 = e2, J e3 = e4.
Model gen_complex_space_form(double kappa);

/// Direct sum of the children; with `rotate`, conjugated by a seeded random
/// orthonormal frame so the blocks are no longer coordinate-aligned.
GeneratedModel gen_direct_sum(std::span<const GeneratorSpec> children, bool rotate,
                              std::uint64_t seed);

/// Dispatch on spec.kind. Non-sum kinds yield a single ground-truth block.
GeneratedModel generate(const GeneratorSpec& spec);

/// phi = c g + n with n a rank-one form along a null direction of the first
/// spacelike/timelike pair; R_phi then has Ricci operator (m-1)c^2 I + (m-2)c N
/// with N^2 = 0 (a single real, non-semisimple eigenvalue). Needs p, q >= 1.
Matrix phi_nilpotent_shift(const InnerProduct& g, double c);

/// phi on signature (2,2) whose operator g^-1 phi is a I + b J' with J'^2 = -I;
/// R_phi then has Ricci eigenvalues (3a^2 + b^2) +- 2ab i.
Matrix phi_complex_pair(double a, double b);

}  // namespace curvjac
