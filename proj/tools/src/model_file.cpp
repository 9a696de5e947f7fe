#include "model_file.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>

namespace curvjac::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(where, "unknown field \"" + key + "\"");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

long long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long long>();
}

std::uint64_t seed_value(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
  fail(where, "expected a non-negative integer seed");
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

std::pair<int, int> signature(const json& obj, const std::string& where) {
  check_keys(obj, {"p", "q"}, where);
  const long long p = integer(require(obj, "p", where), where + "/p");
  const long long q = integer(require(obj, "q", where), where + "/q");
  if (p < 0 || q < 0 || p + q < 1 || p + q > kMaxDim) {
    fail(where, "signature must satisfy p, q >= 0 and 1 <= p + q <= " + std::to_string(kMaxDim));
  }
  return {static_cast<int>(p), static_cast<int>(q)};
}

Matrix phi_matrix(const json& v, int m, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != m) {
    fail(where, "phi must be an array of " + std::to_string(m) + " rows");
  }
  Matrix phi(m, m);
  for (int i = 0; i < m; ++i) {
    const std::string row = where + "/" + std::to_string(i);
    if (!v[i].is_array() || static_cast<int>(v[i].size()) != m) {
      fail(row, "row must have " + std::to_string(m) + " numbers");
    }
    for (int j = 0; j < m; ++j) phi(i, j) = number(v[i][j], row + "/" + std::to_string(j));
  }
  return phi;
}

}  // namespace

GeneratorSpec parse_generator(const json& curv, int p, int q, const std::string& where) {
  const std::string kind_name = text(require(curv, "kind", where), where + "/kind");
  const auto kind = generator_kind_from_string(kind_name);
  if (!kind) fail(where + "/kind", "unknown kind \"" + kind_name + "\"");

  GeneratorSpec spec;
  spec.kind = *kind;
  spec.p = p;
  spec.q = q;
  switch (*kind) {
    case GeneratorKind::Flat:
      check_keys(curv, {"kind"}, where);
      break;
    case GeneratorKind::Constant:
      check_keys(curv, {"kind", "kappa"}, where);
      spec.kappa = number(require(curv, "kappa", where), where + "/kappa");
      break;
    case GeneratorKind::RPhi:
      check_keys(curv, {"kind", "phi"}, where);
      spec.phi = phi_matrix(require(curv, "phi", where), p + q, where + "/phi");
      break;
    case GeneratorKind::RandomAcurv: {
      check_keys(curv, {"kind", "terms", "seed"}, where);
      if (curv.contains("terms")) {
        const long long terms = integer(curv["terms"], where + "/terms");
        if (terms < 1 || terms > 1000) fail(where + "/terms", "terms must be in 1..1000");
        spec.terms = static_cast<int>(terms);
      }
      if (curv.contains("seed")) spec.seed = seed_value(curv["seed"], where + "/seed");
      break;
    }
    case GeneratorKind::ComplexSpaceForm:
      check_keys(curv, {"kind", "kappa"}, where);
      if (p != 4 || q != 0) fail(where, "complex_space_form needs signature (4,0)");
      spec.kappa = number(require(curv, "kappa", where), where + "/kappa");
      break;
    case GeneratorKind::DirectSum: {
      check_keys(curv, {"kind", "children", "rotate", "seed"}, where);
      const json& children = require(curv, "children", where);
      if (!children.is_array() || children.empty()) {
        fail(where + "/children", "expected a non-empty array");
      }
      int sp = 0, sq = 0;
      for (std::size_t n = 0; n < children.size(); ++n) {
        const std::string at = where + "/children/" + std::to_string(n);
        const json& child = children[n];
        check_keys(child, {"dim", "signature", "curvature"}, at);
        const auto [cp, cq] = signature(require(child, "signature", at), at + "/signature");
        if (child.contains("dim") && integer(child["dim"], at + "/dim") != cp + cq) {
          fail(at + "/dim", "dim does not match the signature");
        }
        const json& cc = require(child, "curvature", at);
        check_keys(cc, {"kind", "kappa", "phi", "terms", "seed", "children", "rotate", "entries"},
                   at + "/curvature");
        if (cc.value("kind", "") == "components") {
          fail(at + "/curvature", "direct_sum children must be generator specs");
        }
        spec.children.push_back(parse_generator(cc, cp, cq, at + "/curvature"));
        sp += cp;
        sq += cq;
      }
      if (sp != p || sq != q) {
        fail(where, "children signatures sum to (" + std::to_string(sp) + "," +
                        std::to_string(sq) + ") but the model has (" + std::to_string(p) + "," +
                        std::to_string(q) + ")");
      }
      if (curv.contains("rotate")) {
        if (!curv["rotate"].is_boolean()) fail(where + "/rotate", "expected a boolean");
        spec.rotate = curv["rotate"].get<bool>();
      }
      if (curv.contains("seed")) spec.seed = seed_value(curv["seed"], where + "/seed");
      break;
    }
  }
  return spec;
}

ModelFile parse_model_file(const json& doc) {
  const std::string root = "model";
  check_keys(doc, {"dim", "signature", "curvature", "meta"}, root);
  ModelFile out;
  const long long dim = integer(require(doc, "dim", root), root + "/dim");
  std::tie(out.p, out.q) = signature(require(doc, "signature", root), root + "/signature");
  if (dim != out.p + out.q) fail(root + "/dim", "dim must equal p + q");
  out.dim = static_cast<int>(dim);

  if (doc.contains("meta")) {
    const json& meta = doc["meta"];
    check_keys(meta, {"name", "description"}, root + "/meta");
    if (meta.contains("name")) out.name = text(meta["name"], root + "/meta/name");
    if (meta.contains("description")) {
      out.description = text(meta["description"], root + "/meta/description");
    }
  }

  const json& curv = require(doc, "curvature", root);
  const std::string where = root + "/curvature";
  if (!curv.is_object()) fail(where, "expected an object");
  const std::string kind = text(require(curv, "kind", where), where + "/kind");
  if (kind == "components") {
    check_keys(curv, {"kind", "entries"}, where);
    const json& entries = require(curv, "entries", where);
    if (!entries.is_array()) fail(where + "/entries", "expected an array");
    std::vector<CurvatureEntry> list;
    for (std::size_t n = 0; n < entries.size(); ++n) {
      const std::string at = where + "/entries/" + std::to_string(n);
      const json& e = entries[n];
      if (!e.is_array() || e.size() != 5) fail(at, "expected [i, j, k, l, value]");
      CurvatureEntry c;
      int* idx[] = {&c.i, &c.j, &c.k, &c.l};
      for (int t = 0; t < 4; ++t) {
        const long long v = integer(e[t], at + "/" + std::to_string(t));
        if (v < 1 || v > out.dim) {
          fail(at + "/" + std::to_string(t),
               "index " + std::to_string(v) + " outside 1.." + std::to_string(out.dim));
        }
        *idx[t] = static_cast<int>(v);
      }
      c.value = number(e[4], at + "/4");
      list.push_back(c);
    }
    out.entries = std::move(list);
  } else {
    out.generator = parse_generator(curv, out.p, out.q, where);
  }
  return out;
}

ModelFile read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw InputError(path.string() + ": read error");
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  try {
    ModelFile out = parse_model_file(doc);
    out.digest = fnv1a64(bytes);
    return out;
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Model build_model(const ModelFile& file, double tol) {
  const InnerProduct g(file.p, file.q);
  if (file.entries) return curvature_from_entries(g, *file.entries, tol);
  return generate(*file.generator).model;
}

ordered_json model_file_json(const Model& model, const std::string& name,
                             const std::string& description) {
  ordered_json entries = ordered_json::array();
  for (const CurvatureEntry& e : orbit_representatives(model.curvature())) {
    entries.push_back({e.i, e.j, e.k, e.l, e.value});
  }
  ordered_json doc;
  doc["dim"] = model.dim();
  doc["signature"] = {{"p", model.metric().p()}, {"q", model.metric().q()}};
  doc["curvature"] = {{"kind", "components"}, {"entries", std::move(entries)}};
  doc["meta"] = {{"name", name}, {"description", description}};
  return doc;
}

namespace {

void render_into(std::string& out, const ordered_json& v, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  if (v.is_object() && !v.empty()) {
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + ordered_json(key).dump() + ": ";
      render_into(out, value, depth + 1);
    }
    out += "\n" + close + "}";
  } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const ordered_json& e) {
               return e.is_structured();
             })) {
    out += "[\n";
    for (std::size_t n = 0; n < v.size(); ++n) {
      if (n) out += ",\n";
      out += pad;
      render_into(out, v[n], depth + 1);
    }
    out += "\n" + close + "]";
  } else {
    out += v.dump();
  }
}

}  // namespace

std::string render(const ordered_json& doc) {
  std::string out;
  render_into(out, doc, 0);
  return out + "\n";
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << render(doc))) throw InputError(path.string() + ": cannot write file");
}

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace curvjac::cli
