#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace curvjac::cli {

using nlohmann::ordered_json;

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(round12(*v)) : ordered_json(nullptr);
}

ordered_json clusters_json(const std::vector<EigenCluster>& clusters) {
  ordered_json out = ordered_json::array();
  for (const auto& c : clusters) {
    out.push_back({{"re", round12(c.value.real())},
                   {"im", round12(c.value.imag())},
                   {"multiplicity", c.multiplicity}});
  }
  return out;
}

ordered_json columns_json(const Matrix& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    ordered_json col = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(round12(m(r, c)));
    out.push_back(std::move(col));
  }
  return out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string clusters_text(const std::vector<EigenCluster>& clusters) {
  std::string s;
  for (const auto& c : clusters) {
    if (!s.empty()) s += ", ";
    s += fmt(c.value.real());
    if (c.value.imag() != 0.0) s += (c.value.imag() > 0 ? "+" : "-") + fmt(std::abs(c.value.imag())) + "i";
    s += " x" + std::to_string(c.multiplicity);
  }
  return s;
}

}  // namespace

ordered_json classification_json(const ClassificationReport& rep, const ModelFile& input,
                                 double wall_time_s) {
  ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["input_digest"] = input.digest;
  doc["config"] = {{"tol", rep.config.tol},
                   {"samples", rep.config.samples},
                   {"seed", rep.config.seed}};
  doc["model"] = {{"name", input.name},
                  {"dim", rep.metric.dim()},
                  {"signature", {{"p", rep.metric.p()}, {"q", rep.metric.q()}}}};

  const auto& w = rep.validation.worst;
  doc["validation"] = {
      {"pass", rep.validation.pass},
      {"threshold", round12(rep.validation.threshold)},
      {"worst",
       {{"property", std::string(to_string(w.property))},
        {"indices", {w.indices[0] + 1, w.indices[1] + 1, w.indices[2] + 1, w.indices[3] + 1}},
        {"residual", round12(w.residual)}}}};
  doc["flat"] = {{"value", rep.flat.flat}, {"residual", round12(rep.flat.residual)}};
  doc["constant_curvature"] = {{"kappa", opt(rep.constant_curvature.kappa)},
                               {"fitted", round12(rep.constant_curvature.fitted)},
                               {"residual", round12(rep.constant_curvature.residual)}};
  doc["einstein"] = {{"lambda", opt(rep.einstein.lambda)},
                     {"fitted", round12(rep.einstein.fitted)},
                     {"residual", round12(rep.einstein.residual)}};
  doc["scalar_curvature"] = round12(rep.scalar_curvature);
  doc["pseudo_einstein"] = {{"value", rep.pseudo_einstein.pseudo_einstein},
                            {"clusters", clusters_json(rep.pseudo_einstein.clusters)}};

  ordered_json pv = {{"value", rep.puffini_videv.puffini_videv},
                     {"residual", round12(rep.puffini_videv.residual)}};
  if (const auto& pw = rep.puffini_videv.witness) {
    pv["witness"] = {{"a", pw->a + 1}, {"b", pw->b + 1}, {"residual", round12(pw->residual)}};
  } else {
    pv["witness"] = nullptr;
  }
  doc["puffini_videv"] = std::move(pv);

  ordered_json sweeps = ordered_json::array();
  for (const auto& s : rep.sweeps) {
    ordered_json item = {{"mode", std::string(to_string(s.mode))},
                         {"holds", s.result.holds},
                         {"max_residual", round12(s.result.max_residual)},
                         {"samples", s.result.samples}};
    if (const auto& sw = s.result.witness) {
      item["witness"] = {{"sample", sw->sample},
                         {"residual", round12(sw->residual)},
                         {"vectors", columns_json(sw->vectors)}};
    } else {
      item["witness"] = nullptr;
    }
    sweeps.push_back(std::move(item));
  }
  doc["sweeps"] = std::move(sweeps);

  const Decomposition& d = rep.decomposition;
  ordered_json blocks = ordered_json::array();
  for (const auto& b : d.blocks) {
    blocks.push_back({{"dimension", b.dim()},
                      {"signature", {{"p", b.signature.p()}, {"q", b.signature.q()}}},
                      {"basis", columns_json(b.frame.vectors)},
                      {"einstein", opt(b.einstein)},
                      {"pseudo_einstein", b.pseudo_einstein},
                      {"ricci_clusters", clusters_json(b.ricci_clusters)},
                      {"best_effort", b.best_effort}});
  }
  doc["decomposition"] = {{"best_effort", d.best_effort},
                          {"cross_residual", round12(d.cross_residual)},
                          {"blocks", std::move(blocks)}};
  doc["wall_time_s"] = round12(wall_time_s);
  return doc;
}

void print_classification(std::ostream& out, const ClassificationReport& rep,
                          const ModelFile& input) {
  out << "model: " << (input.name.empty() ? "(unnamed)" : input.name) << " signature ("
      << rep.metric.p() << "," << rep.metric.q() << ")\n";
  const auto& w = rep.validation.worst;
  out << "validation: " << (rep.validation.pass ? "pass" : "FAIL") << " (worst "
      << to_string(w.property) << " residual " << fmt(w.residual) << ")\n";
  out << "flat: " << yes_no(rep.flat.flat) << " (max |R| " << fmt(rep.flat.residual) << ")\n";
  out << "constant curvature: "
      << (rep.constant_curvature.kappa ? fmt(*rep.constant_curvature.kappa) : "none")
      << " (residual " << fmt(rep.constant_curvature.residual) << ")\n";
  out << "einstein: " << (rep.einstein.lambda ? fmt(*rep.einstein.lambda) : "none")
      << " (residual " << fmt(rep.einstein.residual) << ")\n";
  out << "scalar curvature: " << fmt(rep.scalar_curvature) << "\n";
  out << "pseudo-einstein: " << yes_no(rep.pseudo_einstein.pseudo_einstein) << " (ricci "
      << clusters_text(rep.pseudo_einstein.clusters) << ")\n";
  out << "puffini-videv: " << yes_no(rep.puffini_videv.puffini_videv) << " (residual "
      << fmt(rep.puffini_videv.residual);
  if (const auto& pw = rep.puffini_videv.witness) {
    out << ", witness B(e" << pw->a + 1 << ",e" << pw->b + 1 << ")";
  }
  out << ")\n";
  for (const auto& s : rep.sweeps) {
    out << "sweep " << to_string(s.mode) << ": " << (s.result.holds ? "holds" : "fails")
        << " (max residual " << fmt(s.result.max_residual) << ", " << s.result.samples
        << " samples";
    if (s.result.witness) out << ", first witness at sample " << s.result.witness->sample;
    out << ")\n";
  }
  const Decomposition& d = rep.decomposition;
  out << "decomposition: " << d.blocks.size() << (d.blocks.size() == 1 ? " block" : " blocks")
      << (d.best_effort ? " (best effort)" : "") << "\n";
  for (std::size_t n = 0; n < d.blocks.size(); ++n) {
    const auto& b = d.blocks[n];
    out << "  block " << n + 1 << ": dim " << b.dim() << " (" << b.signature.p() << ","
        << b.signature.q() << ") einstein " << (b.einstein ? fmt(*b.einstein) : "none")
        << ", pseudo-einstein " << yes_no(b.pseudo_einstein)
        << (b.best_effort ? ", best effort" : "") << "\n";
  }
}

ordered_json harness_json(const HarnessReport& rep, double wall_time_s) {
  ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["theorem"] = std::string(to_string(rep.theorem));
  doc["config"] = {{"trials", rep.options.trials},
                   {"seed", rep.options.seed},
                   {"tol", rep.options.tol},
                   {"samples", rep.options.samples}};
  doc["trials"] = rep.trials;
  doc["agreements"] = rep.agreements;
  doc["disagreements"] = rep.disagreements;
  doc["excluded"] = rep.excluded;
  ordered_json records = ordered_json::array();
  for (const auto& r : rep.records) {
    ordered_json preds = ordered_json::object();
    for (const auto& p : r.predicates) preds[p.name] = p.value;
    ordered_json item = {{"index", r.index},
                         {"description", r.description},
                         {"excluded", r.excluded},
                         {"agree", r.agree},
                         {"predicates", std::move(preds)}};
    if (!r.block_dims.empty()) {
      ordered_json blocks = ordered_json::array();
      for (std::size_t n = 0; n < r.block_dims.size(); ++n) {
        blocks.push_back({{"dimension", r.block_dims[n]}, {"einstein", opt(r.block_lambdas[n])}});
      }
      item["blocks"] = std::move(blocks);
    }
    if (!r.note.empty()) item["note"] = r.note;
    records.push_back(std::move(item));
  }
  doc["records"] = std::move(records);
  doc["first_disagreement"] =
      rep.first_disagreement ? ordered_json(rep.records[*rep.first_disagreement].index)
                             : ordered_json(nullptr);
  doc["wall_time_s"] = round12(wall_time_s);
  return doc;
}

void print_harness(std::ostream& out, const HarnessReport& rep) {
  out << "theorem " << to_string(rep.theorem) << ": " << rep.trials << " trials, "
      << rep.agreements << " agree, " << rep.disagreements << " disagree, " << rep.excluded
      << " excluded\n";
  for (const auto& r : rep.records) {
    if (r.agree && !r.excluded && r.block_dims.empty()) continue;
    out << "  trial " << r.index << " [" << (r.excluded ? "excluded" : r.agree ? "agree" : "DISAGREE")
        << "] " << r.description << ":";
    for (const auto& p : r.predicates) out << " " << p.name << "=" << (p.value ? "true" : "false");
    if (!r.block_dims.empty()) {
      out << " blocks {";
      for (std::size_t n = 0; n < r.block_dims.size(); ++n) {
        out << (n ? ", " : "") << r.block_dims[n];
        if (r.block_lambdas[n]) out << ":" << fmt(*r.block_lambdas[n]);
      }
      out << "}";
    }
    if (!r.note.empty()) out << " (" << r.note << ")";
    out << "\n";
  }
}

ordered_json reproducer_json(const HarnessReport& rep, const TrialRecord& record) {
  const GeneratedModel gm = generate(record.spec);
  std::string desc = record.description + "; theorem " + std::string(to_string(rep.theorem)) +
                     ", trial " + std::to_string(record.index) + ", seed " +
                     std::to_string(rep.options.seed) + ", samples " +
                     std::to_string(rep.options.samples) + ", tol " + fmt(rep.options.tol) + ";";
  for (const auto& p : record.predicates) {
    desc += " " + p.name + "=" + (p.value ? "true" : "false");
  }
  return model_file_json(gm.model, "counterexample-" + std::string(to_string(rep.theorem)), desc);
}

}  // namespace curvjac::cli
