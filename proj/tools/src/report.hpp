#pragma once

// JSON and text renderings of classification and harness reports. Every
// floating-point field is rounded to 12 significant digits.

#include <ostream>
#include <string>

#include "json.hpp"

#include <curvjac/verify.hpp>

#include "model_file.hpp"

namespace curvjac::cli {

inline constexpr const char* kToolName = "curvjac";
inline constexpr const char* kToolVersion = "1.0.0";

double round12(double x);

nlohmann::ordered_json classification_json(const ClassificationReport& report,
                                           const ModelFile& input, double wall_time_s);
void print_classification(std::ostream& out, const ClassificationReport& report,
                          const ModelFile& input);

nlohmann::ordered_json harness_json(const HarnessReport& report, double wall_time_s);
void print_harness(std::ostream& out, const HarnessReport& report);

/// Reproducer for a harness trial: the instance as an explicit model file,
/// with the harness parameters recorded in meta.
nlohmann::ordered_json reproducer_json(const HarnessReport& report, const TrialRecord& record);

}  // namespace curvjac::cli
