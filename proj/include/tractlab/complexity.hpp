#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tractlab/spectra.hpp"

namespace tractlab {

enum class ErrorCriterion { ABS, NOR };
enum class Setting { WORST, AVG };

const char* to_string(ErrorCriterion c);
const char* to_string(Setting s);

struct ComplexityQuery {
  SpectrumModel model;
  int d = 1;
  double eps = 0.1;
  ErrorCriterion criterion = ErrorCriterion::ABS;
  Setting setting = Setting::WORST;
};

struct ComplexityRow {
  int d = 1;
  double eps = 0.0;
  std::uint64_t n = 0;
};

struct ComplexityTable {
  ErrorCriterion criterion = ErrorCriterion::ABS;
  Setting setting = Setting::WORST;
  std::vector<ComplexityRow> rows;  // sorted by d, then eps descending
};

struct ComplexityOptions {
  std::uint64_t count_cap = std::numeric_limits<std::uint64_t>::max() / 4;
  SumOptions sums;
  int refine_steps = 6;
};

// min{n : sqrt(lambda_{n+1,d}) <= eps} (ABS) or <= eps sqrt(lambda_{1,d}) (NOR).
std::uint64_t n_worst(const ComplexityQuery& q, std::vector<std::string>* warnings = nullptr,
                      const ComplexityOptions& opts = {});

// e_n = sqrt(lambda_{n+1,d}), n = 0..n_max; zero past a finite spectrum.
std::vector<double> optimal_error_curve(const SpectrumModel& model, int d, std::uint64_t n_max,
                                        StreamOptions opts = {});

// sqrt(sum_{k>n} lambda_k)
double avg_error(const SpectrumModel& model, int d, std::uint64_t n, SumOptions opts = {});
// 0.5 * log of the tail sum, kept in log form
double avg_log_error(const SpectrumModel& model, int d, std::uint64_t n, SumOptions opts = {});

std::uint64_t n_avg(const SpectrumModel& model, int d, double eps, ErrorCriterion criterion,
                    const ComplexityOptions& opts = {});

std::uint64_t n_query(const ComplexityQuery& q, std::vector<std::string>* warnings = nullptr,
                      const ComplexityOptions& opts = {});

ComplexityTable complexity_table(const SpectrumModel& model, const std::vector<int>& ds,
                                 const std::vector<double>& eps, ErrorCriterion criterion, Setting setting,
                                 std::vector<std::string>* warnings = nullptr, const ComplexityOptions& opts = {});

}  // namespace tractlab
