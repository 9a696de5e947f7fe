#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "model_file.hpp"
#include "report.hpp"

namespace curvjac::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Common {
  double tol = kDefaultTol;
  int samples = 256;
  std::uint64_t seed = 42;
  int threads = 1;
  bool json = false;
};

// CURVJAC_SEED replaces the built-in default; an explicit --seed still wins.
std::uint64_t default_seed() {
  const char* env = std::getenv("CURVJAC_SEED");
  if (!env || !*env) return 42;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || env[0] == '-') {
    throw InputError(std::string("CURVJAC_SEED is not a non-negative integer: ") + env);
  }
  return v;
}

void add_common(CLI::App* cmd, Common& c, bool sampling) {
  cmd->add_option("--tol", c.tol, "Tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  if (!sampling) return;
  cmd->add_option("--samples", c.samples, "Samples per sweep")
      ->check(CLI::Range(1, 10'000'000))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Base seed (default 42, or CURVJAC_SEED)");
  cmd->add_option("--threads", c.threads, "Sweep threads, 0 = all cores")
      ->check(CLI::Range(0, 1024))
      ->capture_default_str();
  cmd->add_flag("--json", c.json, "Machine-readable report on stdout");
}

int cmd_validate(const std::string& path, const Common& c, std::ostream& out,
                 std::ostream& err) {
  const ModelFile file = read_model_file(path);
  try {
    const Model model = build_model(file, c.tol);
    const ValidationReport rep = validate_curvature(model.curvature(), c.tol);
    const auto& w = rep.worst;
    out << "valid: all symmetries hold (worst " << to_string(w.property) << " residual "
        << w.residual << " at R_" << w.indices[0] + 1 << w.indices[1] + 1 << w.indices[2] + 1
        << w.indices[3] + 1 << ", threshold " << rep.threshold << ")\n";
    return 0;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConflictingEntries || e.kind() == ErrorKind::BianchiViolation) {
      err << "invalid: " << e.what() << "\n";
      return 1;
    }
    throw;
  }
}

int cmd_classify(const std::string& path, const Common& c, std::ostream& out) {
  const auto t0 = Clock::now();
  const ModelFile file = read_model_file(path);
  const Model model = build_model(file, c.tol);
  ClassifyOptions opts;
  opts.tol = c.tol;
  opts.samples = c.samples;
  opts.seed = c.seed;
  opts.threads = c.threads;
  const ClassificationReport rep = classify(model, opts);
  if (c.json) {
    out << render(classification_json(rep, file, seconds_since(t0)));
  } else {
    print_classification(out, rep, file);
  }
  return 0;
}

int cmd_verify(const std::string& id, int trials, const std::string& reproducer, const Common& c,
               std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  const auto theorem = theorem_from_string(id);
  if (!theorem) {
    err << "unknown theorem id \"" << id << "\" (expected 2.1A, 2.1B, 2.2, 2.3, 3.1, 3.2, 3.3)\n";
    return 2;
  }
  VerifyOptions opts;
  opts.trials = trials;
  opts.seed = c.seed;
  opts.tol = c.tol;
  opts.samples = c.samples;
  opts.threads = c.threads;
  const HarnessReport rep = verify_theorem(*theorem, opts);
  if (c.json) {
    out << render(harness_json(rep, seconds_since(t0)));
  } else {
    print_harness(out, rep);
  }
  if (rep.disagreements == 0) return 0;
  const TrialRecord& first = rep.records[*rep.first_disagreement];
  write_json(reproducer, reproducer_json(rep, first));
  err << "disagreement on trial " << first.index << " (" << first.description
      << "); reproducer written to " << reproducer << "\n";
  return 1;
}

std::optional<GeneratorKind> cli_kind(std::string name) {
  for (char& ch : name)
    if (ch == '-') ch = '_';
  return generator_kind_from_string(name);
}

Matrix parse_phi(std::string text) {
  for (char& ch : text)
    if (ch == ',') ch = ' ';
  std::vector<std::vector<double>> rows;
  std::stringstream all(text);
  std::string row;
  while (std::getline(all, row, ';')) {
    std::stringstream in(row);
    std::vector<double> values;
    std::string tok;
    while (in >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (*end != '\0') throw InputError("phi: not a number: " + tok);
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  const int m = static_cast<int>(rows.size());
  Matrix phi(m, m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != m) throw InputError("phi must be square");
    for (int j = 0; j < m; ++j) phi(i, j) = rows[i][j];
  }
  return phi;
}

// "constant,dim=2,kappa=1" or "r-phi,p=1,q=1,phi=1 0;0 -1".
GeneratorSpec parse_block(const std::string& text) {
  std::stringstream in(text);
  std::string name;
  std::getline(in, name, ',');
  const auto kind = cli_kind(name);
  if (!kind || *kind == GeneratorKind::DirectSum) {
    throw InputError("--block: unknown block kind \"" + name + "\"");
  }
  GeneratorSpec spec;
  spec.kind = *kind;
  std::map<std::string, std::string> kv;
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("--block: expected key=value, got \"" + item + "\"");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto integer = [&](const std::string& key) {
    char* end = nullptr;
    const long v = std::strtol(kv[key].c_str(), &end, 10);
    if (kv[key].empty() || *end != '\0' || v < 0) {
      throw InputError("--block: " + key + " must be a non-negative integer");
    }
    return v;
  };
  for (const auto& [key, value] : kv) {
    if (key == "dim" || key == "p") {
      spec.p = static_cast<int>(integer(key));
    } else if (key == "q") {
      spec.q = static_cast<int>(integer(key));
    } else if (key == "kappa") {
      char* end = nullptr;
      spec.kappa = std::strtod(value.c_str(), &end);
      if (value.empty() || *end != '\0') throw InputError("--block: kappa must be a number");
    } else if (key == "terms") {
      spec.terms = static_cast<int>(integer(key));
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(integer(key));
    } else if (key == "phi") {
      spec.phi = parse_phi(value);
    } else {
      throw InputError("--block: unknown key \"" + key + "\"");
    }
  }
  if (kv.count("dim") && kv.count("p")) throw InputError("--block: give dim or p, not both");
  if (*kind == GeneratorKind::ComplexSpaceForm && spec.dim() == 0) spec.p = 4;
  if (*kind == GeneratorKind::RPhi && spec.dim() == 0) spec.p = static_cast<int>(spec.phi.rows());
  if (spec.dim() < 1 || spec.dim() > kMaxDim) throw InputError("--block: bad dimension");
  return spec;
}

struct GenerateArgs {
  std::string kind;
  int dim = 0;
  std::string signature;
  double kappa = 1.0;
  std::string phi;
  int terms = 1;
  std::uint64_t seed = 0;
  bool rotate = false;
  std::vector<std::string> blocks;
  std::string output;
};

int cmd_generate(const GenerateArgs& a, const std::string& description, std::ostream& out) {
  const auto kind = cli_kind(a.kind);
  if (!kind) throw InputError("unknown kind \"" + a.kind + "\"");
  GeneratorSpec spec;
  spec.kind = *kind;
  spec.kappa = a.kappa;
  spec.terms = a.terms;
  spec.seed = a.seed;
  spec.rotate = a.rotate;
  if (!a.phi.empty()) spec.phi = parse_phi(a.phi);
  for (const auto& b : a.blocks) spec.children.push_back(parse_block(b));
  if (*kind == GeneratorKind::DirectSum) {
    if (spec.children.empty()) throw InputError("direct-sum needs at least one --block");
    for (const auto& c : spec.children) {
      spec.p += c.p;
      spec.q += c.q;
    }
  } else if (!a.signature.empty()) {
    int p = -1, q = -1;
    char comma = 0;
    std::stringstream in(a.signature);
    if (!(in >> p >> comma >> q) || comma != ',' || p < 0 || q < 0) {
      throw InputError("--signature must look like P,Q");
    }
    spec.p = p;
    spec.q = q;
  } else if (a.dim > 0) {
    spec.p = a.dim;
  } else if (*kind == GeneratorKind::ComplexSpaceForm) {
    spec.p = 4;
  } else if (*kind == GeneratorKind::RPhi) {
    spec.p = static_cast<int>(spec.phi.rows());
  }
  if (a.dim > 0 && a.dim != spec.dim()) throw InputError("--dim does not match the signature");
  if (spec.dim() < 1 || spec.dim() > kMaxDim) {
    throw InputError("dimension must be in 1.." + std::to_string(kMaxDim));
  }
  if (*kind == GeneratorKind::RPhi && spec.phi.size() == 0) throw InputError("r-phi needs --phi");

  const GeneratedModel gm = generate(spec);
  const auto doc = model_file_json(gm.model, std::string(to_string(*kind)), description);
  if (a.output == "-") {
    out << render(doc);
  } else {
    write_json(a.output, doc);
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature models, Jacobi operators and commutation criteria", "curvjac"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  std::string path;

  auto* validate = app.add_subcommand("validate", "Check the curvature symmetries of a model file");
  validate->add_option("path", path, "Model file (.curv.json)")->required();
  add_common(validate, common, false);

  auto* cls = app.add_subcommand("classify", "Run every predicate and the block decomposition");
  cls->add_option("path", path, "Model file (.curv.json)")->required();
  add_common(cls, common, true);

  std::string theorem;
  int trials = 50;
  std::string reproducer = "counterexample.curv.json";
  auto* verify = app.add_subcommand("verify", "Check an equivalence on seeded instances");
  verify->add_option("--theorem", theorem, "2.1A, 2.1B, 2.2, 2.3, 3.1, 3.2 or 3.3")->required();
  verify->add_option("--trials", trials, "Number of instances")
      ->check(CLI::Range(1, 1'000'000))
      ->capture_default_str();
  verify->add_option("--reproducer", reproducer, "Where the first counterexample is written")
      ->capture_default_str();
  add_common(verify, common, true);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a generated model as explicit components");
  generate_cmd
      ->add_option("kind", gen.kind,
                   "flat, constant, r-phi, random-acurv, complex-space-form or direct-sum")
      ->required();
  generate_cmd->add_option("--dim", gen.dim, "Dimension (Riemannian unless --signature)")
      ->check(CLI::Range(1, kMaxDim));
  generate_cmd->add_option("--signature", gen.signature, "P,Q");
  generate_cmd->add_option("--kappa", gen.kappa, "Curvature constant")->capture_default_str();
  generate_cmd->add_option("--phi", gen.phi, "Symmetric form, rows separated by ';'");
  generate_cmd->add_option("--terms", gen.terms, "R_phi terms")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  generate_cmd->add_flag("--rotate", gen.rotate, "Conjugate a direct sum by a random frame");
  generate_cmd->add_option("--block", gen.blocks, "Direct-sum block, e.g. constant,dim=2,kappa=1");
  generate_cmd->add_option("-o,--output", gen.output, "Output path, '-' for stdout")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    const bool seeded = (cls->parsed() && cls->count("--seed") > 0) ||
                        (verify->parsed() && verify->count("--seed") > 0);
    if (!seeded) common.seed = default_seed();

    if (validate->parsed()) return cmd_validate(path, common, out, err);
    if (cls->parsed()) return cmd_classify(path, common, out);
    if (verify->parsed()) return cmd_verify(theorem, trials, reproducer, common, out, err);
    std::string description = "curvjac generate";
    for (int i = 2; i < argc; ++i) description += std::string(" ") + argv[i];
    return cmd_generate(gen, description, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace curvjac::cli
