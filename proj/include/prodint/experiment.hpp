#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prodint/curve.hpp"
#include "prodint/evolution.hpp"
#include "prodint/group.hpp"

namespace prodint {

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct CheckRow {
  std::string check;
  std::string group;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string identity;  // the identity or bound the row certifies
};

struct ExperimentOutcome {
  int exit_code = 0;  // 0 all pass, 1 numerical failure, 2 schema violation
  std::string message;
  std::vector<CheckRow> rows;
  std::vector<std::string> files_written;
};

// Parses a curve descriptor: kind in {constant, polynomial, fourier, piecewise}.
Curve parse_curve(const nlohmann::json& j, const std::string& path);
PiecewiseCurve parse_piecewise(const nlohmann::json& j, const std::string& path);

ExperimentOutcome run_experiment(const nlohmann::json& config, const std::string& out_dir,
                                 std::optional<long> seed_override = std::nullopt);
ExperimentOutcome run_experiment_file(const std::string& config_path,
                                      const std::string& out_dir = ".",
                                      std::optional<long> seed_override = std::nullopt);

std::string list_experiments();

}  // namespace prodint
