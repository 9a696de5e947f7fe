#pragma once

// The .curv.json model file: metric signature plus either explicit curvature
// components (1-based indices) or a generator spec.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include <curvjac/generate.hpp>

namespace curvjac::cli {

/// Unreadable file, malformed JSON or schema violation (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelFile {
  int dim = 0;
  int p = 0;
  int q = 0;
  std::optional<std::vector<CurvatureEntry>> entries;
  std::optional<GeneratorSpec> generator;
  std::string name;
  std::string description;
  std::string digest;  // FNV-1a 64 of the raw bytes, hex
};

ModelFile parse_model_file(const nlohmann::json& doc);
ModelFile read_model_file(const std::filesystem::path& path);

/// Throws curvjac::Error for numerical rejection (conflicting orbit entries,
/// Bianchi violation, ...).
Model build_model(const ModelFile& file, double tol);

GeneratorSpec parse_generator(const nlohmann::json& curvature, int p, int q,
                              const std::string& where);

/// Model file with every non-zero orbit written out explicitly.
nlohmann::ordered_json model_file_json(const Model& model, const std::string& name,
                                       const std::string& description);

/// Two-space indented JSON with arrays of scalars kept on one line.
std::string render(const nlohmann::ordered_json& doc);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

std::string fnv1a64(std::string_view bytes);

}  // namespace curvjac::cli
