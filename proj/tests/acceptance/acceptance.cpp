// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every criterion also has a wall-clock limit.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <curvjac/classify.hpp>
#include <curvjac/generate.hpp>
#include <curvjac/verify.hpp>

#include "commands.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace curvjac;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary + ", " + std::to_string(checks_) + " checks"};
    return {false, std::to_string(failures_) + "/" + std::to_string(checks_) + " checks failed: " + messages_};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string messages_;
};

InnerProduct zoo_signature(int n) {
  const int m = 3 + n % 4;
  switch (n % 3) {
    case 0: return InnerProduct(m, 0);
    case 1: return InnerProduct(1, m - 1);
    default: return InnerProduct(2, 2);
  }
}

SweepResult sweep(const Model& m, SweepMode mode, int samples, std::uint64_t seed = 42) {
  SweepRequest req;
  req.mode = mode;
  req.samples = samples;
  req.seed = seed;
  return sweep_commutation(m, req);
}

GeneratorSpec spec_of(GeneratorKind kind, int p, int q, double kappa = 0.0) {
  GeneratorSpec s;
  s.kind = kind;
  s.p = p;
  s.q = q;
  s.kappa = kappa;
  return s;
}

GeneratorSpec phi_spec(const InnerProduct& g, Matrix phi) {
  GeneratorSpec s = spec_of(GeneratorKind::RPhi, g.p(), g.q());
  s.phi = std::move(phi);
  return s;
}

VerifyOptions harness_options(int trials, int samples = 256) {
  VerifyOptions o;
  o.trials = trials;
  o.seed = 42;
  o.samples = samples;
  return o;
}

std::string str(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

Outcome structural_identities() {
  Tally t;
  double worst = 0.0;
  for (int n = 0; n < 50; ++n) {
    const InnerProduct g = zoo_signature(n);
    const Model m = gen_random_acurv(g, 1 + n % 3, derive_seed(1001, static_cast<std::uint64_t>(n)));
    std::vector<std::pair<int, int>> pairs;
    for (int r = 0; r <= g.p(); ++r)
      for (int s = 0; s <= g.q(); ++s)
        if (is_admissible(g.p(), g.q(), r, s)) pairs.emplace_back(r, s);
    std::mt19937_64 rng(derive_seed(2002, static_cast<std::uint64_t>(n)));
    for (int k = 0; k < 100; ++k) {
      const auto [r, s] = pairs[static_cast<std::size_t>(k) % pairs.size()];
      const Subspace pi = sample_grassmannian(g, r, s, derive_seed(3003, static_cast<std::uint64_t>(n * 100 + k)));

      const Vector x = pi.frame().column(0);
      const Operator jx = jacobi_op(m, x);
      const double e1 = jx.apply(x).norm() / (1 + jx.frobenius_norm() * x.norm());

      const Operator jp = higher_jacobi_op(m, pi);
      const Vector y = random_normal_vector(rng, g.dim());
      const Vector z = random_normal_vector(rng, g.dim());
      const double e2 = std::max(std::abs(g(jx.apply(y), z) - g(y, jx.apply(z))) / (1 + jx.frobenius_norm()),
                                 std::abs(g(jp.apply(y), z) - g(y, jp.apply(z))) / (1 + jp.frobenius_norm())) /
                        (y.norm() * z.norm());

      Matrix mix = Matrix::Identity(pi.dim(), pi.dim());
      for (int i = 0; i < pi.dim(); ++i)
        for (int j = 0; j < pi.dim(); ++j) mix(i, j) += 0.5 * std::normal_distribution<double>()(rng);
      const Operator jp2 = higher_jacobi_op(m, Subspace::span(g, Matrix(pi.basis() * mix)));
      const double e3 = (jp2.matrix() - jp.matrix()).norm() / (1 + jp.frobenius_norm());

      const double e4 = jacobi_ricci_residual(m, pi);
      const double e = std::max({e1, e2, e3, e4});
      worst = std::max(worst, e);
      t.expect(e <= 1e-10, "model " + std::to_string(n) + " sample " + std::to_string(k) + " residual " + str(e));
    }
  }
  return t.outcome("50 models x 100 subspaces, worst " + str(worst));
}

Outcome sweep_criteria() {
  Tally t;
  for (const auto& g : {InnerProduct(3, 0), InnerProduct(4, 0), InnerProduct(1, 3), InnerProduct(2, 2)}) {
    const auto f = sweep(gen_flat(g), SweepMode::AllPairs, 256);
    t.expect(f.holds && f.max_residual <= 1e-10, "flat all_pairs");

    const Model c = gen_constant(g, 1.0);
    const auto o = sweep(c, SweepMode::OrthoPairs, 256);
    t.expect(o.holds && o.max_residual <= 1e-10, "constant ortho_pairs");
    const auto a = sweep(c, SweepMode::AllPairs, 256);
    t.expect(!a.holds && a.witness && a.witness->residual > 1e-3, "constant all_pairs witness");
    if (a.witness) {
      // Recompute the witness residual with the oracle.
      const auto ja = oracle::jacobi(c, oracle::to_vec(a.witness->vectors.col(0)));
      const auto jb = oracle::jacobi(c, oracle::to_vec(a.witness->vectors.col(1)));
      const double res =
          oracle::frobenius(oracle::commutator(ja, jb)) / (1 + oracle::frobenius(ja) * oracle::frobenius(jb));
      t.expect(std::abs(res - a.witness->residual) <= 1e-9 * (1 + res), "witness recomputation");
    }
  }
  for (int n = 0; n < 12; ++n) {
    const Model r = gen_random_acurv(zoo_signature(n), 2, derive_seed(2101, static_cast<std::uint64_t>(n)));
    if (constant_curvature_check(r).kappa) continue;
    const auto o = sweep(r, SweepMode::OrthoPairs, 256);
    t.expect(!o.holds && o.witness.has_value(), "random ortho_pairs " + std::to_string(n));
  }
  for (auto th : {Theorem::T21A, Theorem::T21B}) {
    const HarnessReport h = verify_theorem(th, harness_options(50));
    t.expect(h.disagreements == 0, std::string(to_string(th)) + " harness disagreements");
  }
  return t.outcome("flat/constant/random sweeps and both harnesses");
}

Outcome einstein_criteria() {
  Tally t;
  const auto einstein_ok = [&](const Model& m, const std::string& what) {
    const auto c1 = sweep(m, SweepMode::C1, 256);
    const auto c2 = sweep(m, SweepMode::C2, 256);
    t.expect(c1.holds && c1.max_residual <= 1e-10, what + " C1");
    t.expect(c2.holds && c2.max_residual <= 1e-10, what + " C2");
  };
  einstein_ok(gen_constant(InnerProduct(4, 0), 1.0), "constant");
  einstein_ok(gen_constant(InnerProduct(2, 2), -0.7), "constant (2,2)");
  einstein_ok(gen_complex_space_form(1.0), "complex space form");

  int negatives = 0;
  for (std::uint64_t seed = 0; negatives < 20 && seed < 200; ++seed) {
    const Model m = gen_random_acurv(InnerProduct(4, 0), 2, derive_seed(2201, seed));
    if (einstein_check(m).lambda) continue;
    if (decompose(m).blocks.size() != 1) continue;
    ++negatives;
    const auto c1 = sweep(m, SweepMode::C1, 256);
    t.expect(!c1.holds && c1.witness.has_value(), "R_phi span seed " + std::to_string(seed) + " passes C1");
  }
  t.expect(negatives == 20, "only " + std::to_string(negatives) + " indecomposible negatives");

  const std::vector<GeneratorSpec> kids{spec_of(GeneratorKind::Constant, 2, 0, 1.0),
                                        spec_of(GeneratorKind::Constant, 2, 0, 2.0)};
  const Model product = gen_direct_sum(kids, true, 5).model;
  t.expect(sweep(product, SweepMode::C1, 256).holds, "product C1");
  t.expect(sweep(product, SweepMode::C2, 256).holds, "product C2");
  t.expect(!einstein_check(product).lambda, "product is Einstein");
  t.expect(decompose(product).blocks.size() > 1, "product not excluded");

  const HarnessReport h = verify_theorem(Theorem::T22, harness_options(50));
  t.expect(h.disagreements == 0, "harness disagreements " + std::to_string(h.disagreements));
  t.expect(h.excluded > 0, "harness generated no decomposible instance");
  return t.outcome("20 negatives, product excluded, harness " + std::to_string(h.agreements) + " agree / " +
                   std::to_string(h.excluded) + " excluded");
}

Outcome three_dimensional_criteria() {
  Tally t;
  for (double kappa : {1.0, -2.0, 0.3}) {
    const auto c1 = sweep(gen_constant(InnerProduct(3, 0), kappa), SweepMode::C1, 256);
    t.expect(c1.holds, "constant C1");
  }
  int negatives = 0;
  for (std::uint64_t seed = 0; negatives < 20 && seed < 200; ++seed) {
    const Model m = gen_random_acurv(InnerProduct(3, 0), 2, derive_seed(2301, seed));
    if (constant_curvature_check(m).kappa) continue;
    ++negatives;
    const auto c1 = sweep(m, SweepMode::C1, 256);
    t.expect(!c1.holds && c1.witness.has_value(), "non-constant seed " + std::to_string(seed) + " passes C1");
  }
  t.expect(negatives == 20, "only " + std::to_string(negatives) + " negatives");
  const HarnessReport h = verify_theorem(Theorem::T23, harness_options(50));
  t.expect(h.disagreements == 0, "harness disagreements " + std::to_string(h.disagreements));
  return t.outcome("20 negatives, harness " + std::to_string(h.agreements) + " agree / " +
                   std::to_string(h.excluded) + " excluded");
}

Outcome polarized_criterion() {
  Tally t;
  const HarnessReport h = verify_theorem(Theorem::T31, harness_options(50, 128));
  int pv = 0, riemannian = 0;
  for (const auto& rec : h.records) {
    pv += rec.predicates[0].value;
    riemannian += rec.spec.q == 0;
  }
  t.expect(h.disagreements == 0, "disagreements " + std::to_string(h.disagreements));
  t.expect(pv > 0 && pv < h.trials, "instances do not span PV and non-PV");
  t.expect(riemannian > 0 && riemannian < h.trials, "instances do not span both signatures");
  return t.outcome("50 trials, " + std::to_string(pv) + " PV, " + std::to_string(riemannian) + " Riemannian");
}

Outcome riemannian_round_trip() {
  Tally t;
  const HarnessReport h = verify_theorem(Theorem::T32, harness_options(60));
  int pos = 0, neg = 0;
  for (const auto& rec : h.records) {
    const bool positive = rec.predicates.size() == 3;
    if (positive) {
      ++pos;
      t.expect(rec.predicates[0].value, "positive trial " + std::to_string(rec.index) + " not PV");
      t.expect(rec.predicates[2].value, "positive trial " + std::to_string(rec.index) + " round trip");
    } else {
      ++neg;
      const Model m = generate(rec.spec).model;
      const auto c = puffini_videv_check(m);
      t.expect(!rec.predicates[0].value && !c.puffini_videv && c.witness.has_value(),
               "negative trial " + std::to_string(rec.index));
    }
  }
  t.expect(pos == 30 && neg == 30, "trial split " + std::to_string(pos) + "/" + std::to_string(neg));
  t.expect(h.disagreements == 0, "disagreements " + std::to_string(h.disagreements));
  return t.outcome(std::to_string(pos) + " round trips, " + std::to_string(neg) + " non-PV with witnesses");
}

Outcome indefinite_blocks() {
  Tally t;
  int best_effort = 0;
  for (int n = 0; n < 20; ++n) {
    std::mt19937_64 rng(derive_seed(3301, static_cast<std::uint64_t>(n)));
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    const auto kappa = [&] { return mag(rng) * (rng() % 2 ? 1.0 : -1.0); };
    std::vector<GeneratorSpec> kids;
    switch (n % 4) {
      case 0:
        kids = {spec_of(GeneratorKind::Constant, 1, 1, kappa()), spec_of(GeneratorKind::Constant, 1, 1, kappa())};
        break;
      case 1:
        kids = {spec_of(GeneratorKind::Constant, 2, 0, kappa()), spec_of(GeneratorKind::Constant, 0, 2, kappa())};
        break;
      case 2:
        kids = {spec_of(GeneratorKind::Constant, 2, 1, kappa()), spec_of(GeneratorKind::Flat, 0, 1)};
        break;
      default: {
        const InnerProduct g(1, 2);
        kids = {phi_spec(g, phi_nilpotent_shift(g, mag(rng))), spec_of(GeneratorKind::Flat, 1, 0)};
      }
    }
    const Model m = gen_direct_sum(kids, true, derive_seed(3302, static_cast<std::uint64_t>(n))).model;
    const Decomposition d = decompose(m);
    if (d.best_effort) ++best_effort;
    for (const auto& b : d.blocks) {
      // Recheck each block on its own restricted model.
      const bool pe = pseudo_einstein_check(ricci_operator(block_model(m, b))).pseudo_einstein;
      t.expect(pe || b.best_effort, "sum " + std::to_string(n) + " has a block that is not pseudo-Einstein");
      t.expect(pe == b.pseudo_einstein || b.best_effort, "sum " + std::to_string(n) + " block flag mismatch");
    }
  }
  const HarnessReport h = verify_theorem(Theorem::T33, harness_options(50));
  t.expect(h.disagreements == 0, "harness disagreements " + std::to_string(h.disagreements));
  return t.outcome("20 sums, " + std::to_string(best_effort) + " best-effort, harness " +
                   std::to_string(h.agreements) + " agree");
}

Outcome jacobi_matrix_column() {
  Tally t;
  double worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    const Model m = gen_random_acurv(InnerProduct(4, 0), 1 + n % 3, derive_seed(801, static_cast<std::uint64_t>(n)));
    const Subspace pi = Subspace::coordinate(m.metric(), std::vector<int>{0, 1, 2});
    const Operator j = higher_jacobi_op(m, pi);
    const auto rho = oracle::ricci_form(m);
    double ksum = 0.0;
    for (int i = 0; i < 3; ++i) ksum += oracle::sectional(m, oracle::unit(4, i), oracle::unit(4, 3));
    const double want[4] = {rho[0][3], rho[1][3], rho[2][3], ksum};
    for (int u = 0; u < 4; ++u) {
      const double e = std::abs(j(u, 3) - want[u]);
      worst = std::max(worst, e);
      t.expect(e <= 1e-10, "model " + std::to_string(n) + " row " + std::to_string(u + 1));
    }
  }
  return t.outcome("20 models, worst " + str(worst));
}

struct CliRun {
  int code = 0;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "curvjac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::string without_wall_time(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text);
  j.erase("wall_time_s");
  return j.dump();
}

Outcome determinism() {
  Tally t;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "curvjac_acceptance";
  fs::create_directories(dir);
  const std::string model = (dir / "model.curv.json").string();
  t.expect(cli({"generate", "random-acurv", "--signature", "2,2", "--terms", "2", "--seed", "4", "-o", model}).code == 0,
           "generate");

  const std::vector<std::vector<std::string>> commands{
      {"classify", model, "--json", "--samples", "128", "--seed", "5"},
      {"verify", "--theorem", "3.1", "--trials", "10", "--samples", "64", "--seed", "5", "--json", "--reproducer",
       (dir / "repro.curv.json").string()},
      {"verify", "--theorem", "2.2", "--trials", "10", "--samples", "64", "--seed", "5", "--json", "--reproducer",
       (dir / "repro.curv.json").string()},
  };
  for (const auto& base : commands) {
    const std::string first = without_wall_time(cli(base).out);
    const std::string second = without_wall_time(cli(base).out);
    auto parallel = base;
    parallel.insert(parallel.end(), {"--threads", "4"});
    const std::string third = without_wall_time(cli(parallel).out);
    t.expect(first == second, base[0] + " differs between runs");
    t.expect(first == third, base[0] + " differs between serial and parallel");
  }
  return t.outcome("classify and verify reports, serial and 4 threads");
}

struct Criterion {
  int number;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, 10, structural_identities}, {2, 10, sweep_criteria},          {3, 60, einstein_criteria},
      {4, 10, three_dimensional_criteria},          {5, 60, polarized_criterion},          {6, 60, riemannian_round_trip},
      {7, 60, indefinite_blocks},            {8, 5, jacobi_matrix_column}, {9, 30, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, c.limit_s);
    std::cout << "criterion " << c.number << ": " << (pass ? "PASS" : "FAIL") << "  " << o.detail;
    if (!in_time) std::cout << "; over the time limit";
    std::cout << " (" << timing << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
