#include <doctest.h>

#include <set>

#include <curvjac/verify.hpp>

#include "support.hpp"

using namespace curvjac;

namespace {

HarnessReport run(Theorem t, int trials, std::uint64_t seed = 42) {
  VerifyOptions opts;
  opts.trials = trials;
  opts.seed = seed;
  opts.samples = 64;
  return verify_theorem(t, opts);
}

}  // namespace

TEST_CASE("theorem identifiers") {
  for (auto t : {Theorem::T21A, Theorem::T21B, Theorem::T22, Theorem::T23, Theorem::T31, Theorem::T32,
                 Theorem::T33}) {
    CHECK(theorem_from_string(to_string(t)) == t);
  }
  CHECK(to_string(Theorem::T22) == "2.2");
  CHECK_FALSE(theorem_from_string("2.4"));
}

TEST_CASE("preconditions") {
  VerifyOptions opts;
  opts.trials = 0;
  CHECK_THROWS_AS(verify_theorem(Theorem::T22, opts), Error);
  opts.trials = 1;
  opts.samples = 0;
  CHECK_THROWS_AS(verify_theorem(Theorem::T22, opts), Error);
}

TEST_CASE("every statement agrees on a short run") {
  for (auto t : {Theorem::T21A, Theorem::T21B, Theorem::T22, Theorem::T23, Theorem::T31, Theorem::T32,
                 Theorem::T33}) {
    CAPTURE(to_string(t));
    const HarnessReport r = run(t, 12);
    CHECK(r.trials == 12);
    CHECK(r.disagreements == 0);
    CHECK(r.agreements + r.disagreements + r.excluded == r.trials);
    CHECK_FALSE(r.first_disagreement);
    CHECK(r.records.size() == 12);
  }
}

TEST_CASE("Einstein criterion excludes decomposible product instances") {
  const HarnessReport r = run(Theorem::T22, 20, 7);
  CHECK(r.excluded > 0);
  CHECK(r.disagreements == 0);
  for (const auto& rec : r.records)
    if (rec.excluded) CHECK(rec.block_dims.size() > 1);
}

TEST_CASE("Riemannian block statement lists recovered blocks") {
  const HarnessReport r = run(Theorem::T32, 10, 1);
  CHECK(r.disagreements == 0);
  int with_blocks = 0;
  for (const auto& rec : r.records)
    if (rec.block_dims.size() >= 2) ++with_blocks;
  CHECK(with_blocks >= 4);
}

TEST_CASE("harness is deterministic in the seed") {
  const HarnessReport a = run(Theorem::T31, 6, 3);
  const HarnessReport b = run(Theorem::T31, 6, 3);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].description == b.records[i].description);
    REQUIRE(a.records[i].predicates.size() == b.records[i].predicates.size());
    for (std::size_t k = 0; k < a.records[i].predicates.size(); ++k)
      CHECK(a.records[i].predicates[k].value == b.records[i].predicates[k].value);
  }
  const HarnessReport c = run(Theorem::T31, 6, 4);
  std::set<std::string> da, dc;
  for (const auto& rec : a.records) da.insert(rec.description);
  for (const auto& rec : c.records) dc.insert(rec.description);
  CHECK(da != dc);
}
