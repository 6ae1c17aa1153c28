#pragma once
// Shared machinery for the criteria and tfunc checks.

#include <functional>
#include <string>

#include "tractlab/criteria.hpp"

namespace tractlab::detail {

enum class Decision { None, Holds, Violated, Diverges, Unknown };

struct AnalyticDecision {
  Decision kind = Decision::None;
  std::string basis;
};

using PerDFn = std::function<PerDValue(int d)>;

// Runs f over d = 1..d_max and folds in the analytic decision; falls back to
// the upper-half slope rule when there is none.
CriterionVerdict evaluate_criterion(std::string name, int d_max, const PerDFn& f, const AnalyticDecision& dec,
                                    double trend_threshold, bool need_values = true);

// value(d) = scale * d^{-damp} * (sum_{n >= start(d)} g(lambda_n))^{root},
// g = lambda^tau, or min(1, lambda^tau) when clip is set.
struct PowerSumSpec {
  double tau = 1.0;
  double scale = 1.0;
  double damp = 0.0;
  double root = 1.0;
  std::function<std::uint64_t(int)> start = [](int) { return std::uint64_t{1}; };
  double start_exponent = 0.0;  // start(d) grows like d^start_exponent
  bool clip = false;
};

AnalyticDecision power_sum_decision(const SpectrumModel& m, const PowerSumSpec& s);
PerDValue power_sum_value(const SpectrumModel& m, int d, const PowerSumSpec& s, const SumOptions& o);

struct StreamSumSpec {
  std::uint64_t start = 1;
  std::function<double(std::uint64_t n, double log_lambda)> term;
  // bound on the terms with rank > N given log lambda_N; +inf when not certifiable
  std::function<double(std::uint64_t N, double log_lambda_N)> tail;
};

// Throws Inconclusive when no finite tail bound is reached by the term cap.
TailSumResult stream_sum(const SpectrumModel& m, int d, const StreamSumSpec& s, const SumOptions& o);

// Eigenvalues decay only algebraically in the rank (Korobov families, power-law tails).
bool algebraic_decay(const SpectrumModel& m);
bool d_independent(const SpectrumModel& m);

// Rank beyond which the count envelope gives ln(1/lambda_n) >= (n/A)^{1/B}.
double envelope_rank(const CountEnvelope& e);

std::uint64_t ceil_index(double x);

}  // namespace tractlab::detail
