#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tractlab/criteria.hpp"

namespace tractlab {

enum class TFamily { ALG, EXP, QPT, Custom };
const char* to_string(TFamily f);

// ALG: T = d^q max{1, 1/eps}^p, params (q, p)
// EXP: T = (1 + ln max{1, 1/eps})^p d^q, params (q, p)
// QPT: T = exp(p (1 + ln d)(1 + ln max{1, 1/eps})), params (p)
struct TractabilityFunctionSpec {
  TFamily family = TFamily::ALG;
  // Custom only: T(inv_eps, d, p); inv_eps = 0 is the eps -> infinity limit.
  std::function<double(double, int, const std::vector<double>&)> custom;
  int custom_params = 1;
  std::string name;

  static TractabilityFunctionSpec alg() { return {TFamily::ALG, {}, 0, "ALG"}; }
  static TractabilityFunctionSpec exp() { return {TFamily::EXP, {}, 0, "EXP"}; }
  static TractabilityFunctionSpec qpt() { return {TFamily::QPT, {}, 0, "QPT"}; }
  static TractabilityFunctionSpec make_custom(std::string name, int s,
                                              std::function<double(double, int, const std::vector<double>&)> f) {
    return {TFamily::Custom, std::move(f), s, std::move(name)};
  }
  int s() const;
};

struct TParams {
  std::vector<double> p;
  double C_p = 1.0;
  double H = 1.0;
  double K = 1.0;
};

// inv_eps = 0 returns the limit T(0, d, p).
double eval_T(const TractabilityFunctionSpec& spec, double inv_eps, int d, const std::vector<double>& p);

struct TGrid {
  std::vector<double> inv_eps;
  std::vector<int> d;
  std::vector<std::vector<double>> p;
  std::vector<double> tau;
  static TGrid default_for(const TractabilityFunctionSpec& spec);
};

struct AssumptionCheck {
  std::string name;
  bool passed = true;
  std::string witness;  // first failing grid point
};

struct TValidationReport {
  std::vector<AssumptionCheck> checks;  // monotone, unbounded, limit, power
  double K = 0.0;                       // smallest constant that works on the grid
  bool all_passed() const;
};

TValidationReport validate_T(const TractabilityFunctionSpec& spec, const TGrid& grid);
TValidationReport validate_T(const TractabilityFunctionSpec& spec);

// sup_d sum_{n >= ceil(H T(0,d,p))} 1 / T(lambda_{n,d}^{-1/2}, 1, p)
CriterionVerdict t_condition_check(const SpectrumModel& model, const TractabilityFunctionSpec& spec,
                                   const std::vector<double>& p, double H, int d_max, SumOptions sums = {},
                                   double trend_threshold = 0.05);

}  // namespace tractlab
