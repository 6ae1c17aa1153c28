#pragma once
// JSON run configuration for the tractlab command-line tool. The schema is
// documented in docs/config.md.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tractlab/complexity.hpp"
#include "tractlab/criteria.hpp"
#include "tractlab/tfunc.hpp"

namespace tractlab {

// A configuration problem, tagged with the offending field path ("problem.gamma.kind").
struct ConfigError : std::runtime_error {
  ConfigError(std::string path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), field(std::move(path)) {}
  std::string field;
};

struct AnalysisRequest {
  std::string name;
  CriterionParams params;
  double tol = 1e-3;  // exponent bisections
  // tfunc
  std::optional<TFamily> family;
  std::vector<double> tp;
  // sigma_bound
  double p = 0.0;
  int d = 1;
  double delta = 0.0;
  int ell_check = 20;
  int ell_sum = 2000;
  // growth_model
  std::string expr;
  std::vector<std::string> compare;
  std::vector<std::pair<double, int>> points;
};

struct RunConfig {
  SpectrumModel model;
  std::vector<double> eps;
  std::vector<int> ds;
  std::vector<ErrorCriterion> criteria{ErrorCriterion::ABS};
  std::vector<Setting> settings{Setting::WORST};
  std::vector<AnalysisRequest> analyses;
  int spectrum_d = 1;
  std::uint64_t spectrum_k = 10;
  std::uint64_t verify_top_k = 0;  // 0 skips the spectrum comparison
  int verify_max_radius = 64;
  std::string format = "csv";
  std::string out_path;  // empty: stdout
  ComplexityOptions copts;
  std::string echo;  // canonical JSON of the input

  static const std::vector<std::string>& analysis_names();
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Flag overrides; each applies to every analysis or budget it names.
void apply_dmax(RunConfig& c, int d_max);
void apply_tolerance(RunConfig& c, double tol);
void apply_budget(RunConfig& c, std::uint64_t budget);

}  // namespace tractlab
