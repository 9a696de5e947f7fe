#include "curvjac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace curvjac {

std::string_view to_string(Theorem t) noexcept {
  switch (t) {
    case Theorem::T21A: return "2.1A";
    case Theorem::T21B: return "2.1B";
    case Theorem::T22: return "2.2";
    case Theorem::T23: return "2.3";
    case Theorem::T31: return "3.1";
    case Theorem::T32: return "3.2";
    case Theorem::T33: return "3.3";
  }
  return "unknown";
}

std::optional<Theorem> theorem_from_string(std::string_view id) noexcept {
  for (auto t : {Theorem::T21A, Theorem::T21B, Theorem::T22, Theorem::T23, Theorem::T31,
                 Theorem::T32, Theorem::T33}) {
    if (to_string(t) == id) return t;
  }
  return std::nullopt;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string sig(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  /// Magnitude in [0.5, 2] with a random sign.
  double kappa() { return (integer(0, 1) ? 1.0 : -1.0) * real(0.5, 2.0); }
  std::uint64_t seed() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

GeneratorSpec constant(int p, int q, double kappa) {
  GeneratorSpec s;
  s.kind = GeneratorKind::Constant;
  s.p = p;
  s.q = q;
  s.kappa = kappa;
  return s;
}

GeneratorSpec flat(int p, int q) {
  GeneratorSpec s;
  s.kind = GeneratorKind::Flat;
  s.p = p;
  s.q = q;
  return s;
}

GeneratorSpec random_acurv(int p, int q, int terms, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = GeneratorKind::RandomAcurv;
  s.p = p;
  s.q = q;
  s.terms = terms;
  s.seed = seed;
  return s;
}

GeneratorSpec r_phi(int p, int q, Matrix phi) {
  GeneratorSpec s;
  s.kind = GeneratorKind::RPhi;
  s.p = p;
  s.q = q;
  s.phi = std::move(phi);
  return s;
}

GeneratorSpec csf(double kappa) {
  GeneratorSpec s;
  s.kind = GeneratorKind::ComplexSpaceForm;
  s.p = 4;
  s.kappa = kappa;
  return s;
}

GeneratorSpec rotated(std::vector<GeneratorSpec> children, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = GeneratorKind::DirectSum;
  for (const auto& c : children) {
    s.p += c.p;
    s.q += c.q;
  }
  s.children = std::move(children);
  s.rotate = true;
  s.seed = seed;
  return s;
}

struct Instance {
  std::string description;
  GeneratorSpec spec;
  bool known_positive = false;  // constructed to satisfy the block statement
};

class Trial {
 public:
  Trial(const VerifyOptions& opts, std::uint64_t seed) : opts_(opts), seed_(seed) {}

  bool sweep(const Model& model, SweepMode mode, int r = 0, int s = 0) {
    SweepRequest req;
    req.mode = mode;
    req.r = r;
    req.s = s;
    req.samples = opts_.samples;
    req.seed = derive_seed(seed_, ++stream_);
    req.tol = opts_.tol;
    req.threads = opts_.threads;
    return sweep_commutation(model, req).holds;
  }

 private:
  const VerifyOptions& opts_;
  std::uint64_t seed_;
  std::uint64_t stream_ = 0;
};

Instance instance_21a(int index, Draw& d) {
  const int m = d.integer(3, 6);
  switch (index % 4) {
    case 0: return {"flat " + sig(m, 0), flat(m, 0)};
    case 1: {
      const double k = d.kappa();
      return {"constant kappa=" + num(k) + " " + sig(m, 0), constant(m, 0, k)};
    }
    case 2: {
      const int terms = d.integer(1, 3);
      return {"random_acurv terms=" + std::to_string(terms) + " " + sig(m, 0),
              random_acurv(m, 0, terms, d.seed())};
    }
    default: {
      const int a = d.integer(1, m - 1);
      const double k1 = d.kappa(), k2 = d.kappa();
      return {"rotated constant " + sig(a, 0) + " + constant " + sig(m - a, 0),
              rotated({constant(a, 0, k1), constant(m - a, 0, k2)}, d.seed())};
    }
  }
}

Instance instance_21b(int index, Draw& d) {
  const int m = d.integer(3, 6);
  switch (index % 4) {
    case 0: return {"constant kappa=0 " + sig(m, 0), constant(m, 0, 0.0)};
    case 1: {
      const double k = d.kappa();
      return {"constant kappa=" + num(k) + " " + sig(m, 0), constant(m, 0, k)};
    }
    case 2: {
      const int terms = d.integer(1, 3);
      return {"random_acurv terms=" + std::to_string(terms) + " " + sig(m, 0),
              random_acurv(m, 0, terms, d.seed())};
    }
    default: {
      const double k = d.kappa();
      return {"rotated complex_space_form kappa=" + num(k), rotated({csf(k)}, d.seed())};
    }
  }
}

Instance instance_22(int index, Draw& d) {
  switch (index % 5) {
    case 0: {
      const double k = d.kappa();
      return {"constant kappa=" + num(k) + " (4,0)", constant(4, 0, k)};
    }
    case 1: {
      const double k = d.kappa();
      return {"rotated complex_space_form kappa=" + num(k), rotated({csf(k)}, d.seed())};
    }
    case 2: return {"random_acurv terms=2 (4,0)", random_acurv(4, 0, 2, d.seed())};
    case 3: {
      const double k1 = d.kappa();
      const double k2 = k1 + d.real(0.5, 1.5);
      return {"rotated product constant " + num(k1) + " (2,0) + constant " + num(k2) + " (2,0)",
              rotated({constant(2, 0, k1), constant(2, 0, k2)}, d.seed())};
    }
    default: return {"random_acurv terms=1 (4,0)", random_acurv(4, 0, 1, d.seed())};
  }
}

Instance instance_23(int index, Draw& d) {
  switch (index % 4) {
    case 0: {
      const double k = d.kappa();
      return {"constant kappa=" + num(k) + " (3,0)", constant(3, 0, k)};
    }
    case 1: {
      const int terms = d.integer(1, 2);
      return {"random_acurv terms=" + std::to_string(terms) + " (3,0)",
              random_acurv(3, 0, terms, d.seed())};
    }
    case 2: {
      const double k = d.kappa();
      return {"rotated product line + constant " + num(k) + " (2,0)",
              rotated({flat(1, 0), constant(2, 0, k)}, d.seed())};
    }
    default: return {"random_acurv terms=3 (3,0)", random_acurv(3, 0, 3, d.seed())};
  }
}

Instance instance_31(int index, Draw& d) {
  const int m = d.integer(3, 5);
  switch (index % 6) {
    case 0: {
      const double k = d.kappa();
      return {"constant kappa=" + num(k) + " " + sig(m, 0), constant(m, 0, k)};
    }
    case 1: {
      const double k1 = d.kappa(), k2 = d.kappa();
      return {"rotated Einstein sum (2,0) + " + sig(m - 2, 0),
              rotated({constant(2, 0, k1), constant(m - 2, 0, k2)}, d.seed())};
    }
    case 2: {
      const int terms = d.integer(1, 3);
      return {"random_acurv terms=" + std::to_string(terms) + " " + sig(m, 0),
              random_acurv(m, 0, terms, d.seed())};
    }
    case 3: {
      const double k = d.kappa();
      return {"constant kappa=" + num(k) + " (2,2)", constant(2, 2, k)};
    }
    case 4: {
      const int terms = d.integer(1, 3);
      return {"random_acurv terms=" + std::to_string(terms) + " (2,2)",
              random_acurv(2, 2, terms, d.seed())};
    }
    default: {
      const double k1 = d.kappa(), k2 = d.kappa();
      return {"rotated Einstein sum (1,1) + (1,1)",
              rotated({constant(1, 1, k1), constant(1, 1, k2)}, d.seed())};
    }
  }
}

Instance instance_32(int index, Draw& d) {
  if (index % 2 == 1) {
    const int m = d.integer(3, 6);
    const int terms = d.integer(1, 3);
    return {"random_acurv terms=" + std::to_string(terms) + " " + sig(m, 0),
            random_acurv(m, 0, terms, d.seed())};
  }
  const int count = d.integer(2, 4);
  std::vector<GeneratorSpec> blocks;
  std::string desc = "rotated Einstein sum";
  int total = 0;
  for (int b = 0; b < count; ++b) {
    const int room = 8 - total - (count - b - 1);
    const double k = d.kappa();
    if (room >= 4 && d.integer(0, 4) == 0) {
      blocks.push_back(csf(k));
      desc += b ? " + csf" : " csf";
    } else {
      const int dim = d.integer(1, std::min(4, room));
      blocks.push_back(constant(dim, 0, k));
      desc += (b ? " + constant" : " constant") + sig(dim, 0);
    }
    total += blocks.back().dim();
  }
  return {desc, rotated(std::move(blocks), d.seed()), true};
}

Instance instance_33(int index, Draw& d) {
  switch (index % 7) {
    case 0: {
      const double k1 = d.kappa(), k2 = d.kappa();
      return {"rotated constant (1,1) + constant (1,1)",
              rotated({constant(1, 1, k1), constant(1, 1, k2)}, d.seed()), true};
    }
    case 1: {
      const double k1 = d.kappa(), k2 = d.kappa();
      return {"rotated constant (2,0) + constant (0,2)",
              rotated({constant(2, 0, k1), constant(0, 2, k2)}, d.seed()), true};
    }
    case 2: {
      const double k = d.kappa();
      return {"rotated constant (2,1) + flat (0,1)",
              rotated({constant(2, 1, k), flat(0, 1)}, d.seed()), true};
    }
    case 3: {
      const double c = d.kappa();
      return {"rotated nilpotent R_phi (1,2) c=" + num(c) + " + flat (1,0)",
              rotated({r_phi(1, 2, phi_nilpotent_shift(InnerProduct(1, 2), c)), flat(1, 0)},
                      d.seed()),
              true};
    }
    case 4: {
      const double a = d.kappa(), b = d.kappa();
      return {"rotated complex-pair R_phi (2,2) a=" + num(a) + " b=" + num(b),
              rotated({r_phi(2, 2, phi_complex_pair(a, b))}, d.seed()), true};
    }
    case 5: {
      const double k = d.kappa();
      return {"constant kappa=" + num(k) + " (2,2)", constant(2, 2, k), true};
    }
    default: {
      const int terms = d.integer(1, 2);
      return {"random_acurv terms=" + std::to_string(terms) + " (2,2)",
              random_acurv(2, 2, terms, d.seed())};
    }
  }
}

Instance make_instance(Theorem t, int index, Draw& d) {
  switch (t) {
    case Theorem::T21A: return instance_21a(index, d);
    case Theorem::T21B: return instance_21b(index, d);
    case Theorem::T22: return instance_22(index, d);
    case Theorem::T23: return instance_23(index, d);
    case Theorem::T31: return instance_31(index, d);
    case Theorem::T32: return instance_32(index, d);
    case Theorem::T33: return instance_33(index, d);
  }
  return {};
}

bool all_equal(const std::vector<Predicate>& ps) {
  return std::all_of(ps.begin(), ps.end(), [&](const Predicate& p) { return p.value == ps[0].value; });
}

void summarize(TrialRecord& rec, const Decomposition& dec) {
  for (const auto& b : dec.blocks) {
    rec.block_dims.push_back(b.dim());
    rec.block_lambdas.push_back(b.einstein);
  }
}

// Dimension multiset and sorted Einstein constants against ground truth.
bool round_trip(const GeneratedModel& gm, const Decomposition& dec, double tol) {
  if (gm.blocks.size() != dec.blocks.size()) return false;
  std::vector<std::pair<int, double>> want, got;
  for (const auto& b : gm.blocks) {
    if (!b.einstein) return false;
    want.emplace_back(b.signature.dim(), *b.einstein);
  }
  for (const auto& b : dec.blocks) {
    if (!b.einstein) return false;
    got.emplace_back(b.dim(), *b.einstein);
  }
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i].first != got[i].first) return false;
    if (std::abs(want[i].second - got[i].second) > tol * (1.0 + std::abs(want[i].second))) {
      return false;
    }
  }
  return true;
}

TrialRecord run_trial(Theorem theorem, int index, const VerifyOptions& opts) {
  const std::uint64_t seed = derive_seed(opts.seed, static_cast<std::uint64_t>(index));
  Draw draw(seed);
  Instance inst = make_instance(theorem, index, draw);
  const GeneratedModel gm = generate(inst.spec);
  const Model& model = gm.model;
  const double tol = opts.tol;
  Trial trial(opts, derive_seed(seed, 0x7ULL));

  TrialRecord rec;
  rec.index = index;
  rec.description = std::move(inst.description);
  rec.spec = std::move(inst.spec);
  auto& ps = rec.predicates;

  switch (theorem) {
    case Theorem::T21A:
      ps.push_back({"flat", is_flat(model, tol).flat});
      ps.push_back({"all_pairs_commute", trial.sweep(model, SweepMode::AllPairs)});
      rec.agree = all_equal(ps);
      break;
    case Theorem::T21B:
      ps.push_back({"constant_curvature", constant_curvature_check(model, tol).kappa.has_value()});
      ps.push_back({"ortho_pairs_commute", trial.sweep(model, SweepMode::OrthoPairs)});
      rec.agree = all_equal(ps);
      break;
    case Theorem::T22:
    case Theorem::T23: {
      const Decomposition dec = decompose(model, tol);
      summarize(rec, dec);
      ps.push_back({"indecomposible", dec.blocks.size() == 1});
      ps.push_back({"c1", trial.sweep(model, SweepMode::C1)});
      if (theorem == Theorem::T22) {
        ps.push_back({"c2", trial.sweep(model, SweepMode::C2)});
        ps.push_back({"einstein", einstein_check(model, tol).lambda.has_value()});
      } else {
        ps.push_back(
            {"constant_curvature", constant_curvature_check(model, tol).kappa.has_value()});
      }
      rec.excluded = dec.blocks.size() != 1;
      rec.agree = all_equal(std::vector<Predicate>(ps.begin() + 1, ps.end()));
      if (rec.excluded) {
        rec.note = "decomposible into " + std::to_string(dec.blocks.size()) +
                   " blocks: excluded by the indecomposibility pre-check";
      }
      break;
    }
    case Theorem::T31: {
      const InnerProduct& g = model.metric();
      ps.push_back({"polarized", puffini_videv_check(model, tol).puffini_videv});
      bool any = false, all = true;
      for (int r = 0; r <= g.p(); ++r)
        for (int s = 0; s <= g.q(); ++s) {
          if (!is_admissible(g.p(), g.q(), r, s)) continue;
          const bool holds = trial.sweep(model, SweepMode::Grassmann, r, s);
          any = any || holds;
          all = all && holds;
        }
      ps.push_back({"some_admissible_pair", any});
      ps.push_back({"every_admissible_pair", all});
      rec.agree = all_equal(ps);
      break;
    }
    case Theorem::T32: {
      const Decomposition dec = decompose(model, tol);
      summarize(rec, dec);
      const bool einstein_blocks =
          !dec.best_effort && std::all_of(dec.blocks.begin(), dec.blocks.end(),
                                          [](const auto& b) { return b.einstein.has_value(); });
      ps.push_back({"puffini_videv", puffini_videv_check(model, tol).puffini_videv});
      ps.push_back({"einstein_blocks", einstein_blocks});
      rec.agree = all_equal(ps);
      if (inst.known_positive) {
        const bool ok = round_trip(gm, dec, 1e-8);
        ps.push_back({"round_trip", ok});
        rec.agree = rec.agree && ok && ps[0].value;
        if (!ok) rec.note = "recovered blocks differ from the generated ones";
      }
      break;
    }
    case Theorem::T33: {
      const Decomposition dec = decompose(model, tol);
      summarize(rec, dec);
      const bool pv = puffini_videv_check(model, tol).puffini_videv;
      const bool blocks_ok =
          std::all_of(dec.blocks.begin(), dec.blocks.end(),
                      [](const auto& b) { return b.pseudo_einstein || b.best_effort; });
      ps.push_back({"puffini_videv", pv});
      ps.push_back({"pseudo_einstein_blocks", blocks_ok});
      ps.push_back({"pseudo_einstein_construction", inst.known_positive});
      // Only the stated direction is tested; best-effort blocks are never
      // counted as refutations.
      rec.agree = !((pv || inst.known_positive) && !blocks_ok);
      if (dec.best_effort) rec.note = "degenerate split: blocks flagged best_effort";
      break;
    }
  }
  return rec;
}

}  // namespace

HarnessReport verify_theorem(Theorem theorem, const VerifyOptions& options) {
  if (options.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (options.samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  HarnessReport rep;
  rep.theorem = theorem;
  rep.options = options;
  rep.trials = options.trials;
  for (int i = 0; i < options.trials; ++i) {
    TrialRecord rec = run_trial(theorem, i, options);
    if (rec.excluded) {
      ++rep.excluded;
    } else if (rec.agree) {
      ++rep.agreements;
    } else {
      ++rep.disagreements;
      if (!rep.first_disagreement) rep.first_disagreement = static_cast<int>(rep.records.size());
    }
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

}  // namespace curvjac
