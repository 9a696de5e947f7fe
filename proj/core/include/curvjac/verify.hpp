#pragma once

// Empirical equivalence checks: seeded positive and negative instances are
// run through both sides of each statement and the verdicts compared.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvjac/classify.hpp"
#include "curvjac/generate.hpp"

namespace curvjac {

enum class Theorem { T21A, T21B, T22, T23, T31, T32, T33 };

/// "2.1A", "2.1B", "2.2", "2.3", "3.1", "3.2", "3.3".
std::string_view to_string(Theorem t) noexcept;
std::optional<Theorem> theorem_from_string(std::string_view id) noexcept;

struct VerifyOptions {
  int trials = 50;
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
  int samples = 256;  // per sweep
  int threads = 1;
};

struct Predicate {
  std::string name;
  bool value = false;
};

struct TrialRecord {
  int index = 0;
  std::string description;
  GeneratorSpec spec;  // regenerates the instance
  /// Outside the hypotheses (e.g. decomposible where indecomposible is
  /// required); never counted as agreement or disagreement.
  bool excluded = false;
  bool agree = true;
  std::vector<Predicate> predicates;
  std::string note;
  /// Decomposition summary, filled for the block statements.
  std::vector<int> block_dims;
  std::vector<std::optional<double>> block_lambdas;
};

struct HarnessReport {
  Theorem theorem = Theorem::T21A;
  VerifyOptions options;
  int trials = 0;
  int agreements = 0;
  int disagreements = 0;
  int excluded = 0;
  std::vector<TrialRecord> records;
  std::optional<int> first_disagreement;  // index into records
};

/// Throws InvalidArgument when trials < 1 or samples < 1.
HarnessReport verify_theorem(Theorem theorem, const VerifyOptions& options = {});

}  // namespace curvjac
