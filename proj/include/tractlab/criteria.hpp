#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tractlab/spectra.hpp"

namespace tractlab {

struct CriterionParams {
  double tau = 1.0;
  std::uint64_t L = 1;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 1.0;
  double H = 1.0;
  std::vector<double> c_grid{0.5};
  int d_max = 10;
  SumOptions sums;
  // upper-half log slope above which exact per-d values count as growing
  double trend_threshold = 0.05;

  void validate() const;
};

enum class VerdictStatus { HoldsUpToDmax, ViolatedAtD, DivergesForAllTestedParams, Inconclusive };
const char* to_string(VerdictStatus s);

struct PerDValue {
  int d = 0;
  double value = 0.0;
  double tail_bound = 0.0;
};

// One evaluated parameter (a single c for the WT check).
struct ParamTrace {
  double param = 0.0;
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::vector<PerDValue> per_d;
  std::optional<double> growth_slope;
  int violated_d = 0;
  double certified_lower_bound = 0.0;
  std::string basis;
};

struct CriterionVerdict {
  std::string criterion;
  VerdictStatus status = VerdictStatus::Inconclusive;
  int violated_d = 0;
  double certified_lower_bound = 0.0;
  std::vector<PerDValue> per_d;
  double sup_estimate = 0.0;
  std::optional<double> growth_slope;
  std::string basis;  // what decided the status
  std::string caveat;
  std::vector<std::string> diagnostics;
  std::vector<ParamTrace> traces;

  bool holds() const { return status == VerdictStatus::HoldsUpToDmax; }
};

// sup_d (sum_{n>=L} lambda_{n,d}^tau)^{1/tau}
CriterionVerdict alg_spt_check(const SpectrumModel& model, const CriterionParams& params);
// sup_d d^{-tau1} (sum_{n>=ceil(H d^tau2)} lambda_{n,d}^tau3)^{1/tau3}
CriterionVerdict alg_pt_check(const SpectrumModel& model, const CriterionParams& params);
// inf 2 tau over tau with a bounded SPT sum; +inf when none found.
double alg_spt_exponent(const SpectrumModel& model, std::uint64_t L, int d_max, double tol = 1e-3,
                        SumOptions sums = {});
// e^{-cd} sum_n exp(-c lambda_{n,d}^{-1/2}) for every c in the grid
CriterionVerdict alg_wt_check(const SpectrumModel& model, const CriterionParams& params);

enum class TensorClass { IntractableLambdaAboveOne, IntractableDegenerateTop, NoPTMaybeWT, WTPTSPTPossible };
const char* to_string(TensorClass c);
struct TensorClassification {
  TensorClass label = TensorClass::WTPTSPTPossible;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::string caveat;
};
TensorClassification tensor_classify(const UnivariateSpectrum& univ);

struct ProductWeightReport {
  double p_gamma = 0.0;  // +inf when no power of the weights is summable
  bool spt = false;
  bool pt = false;
  std::optional<double> spt_exponent;
  bool wt = false;
  std::vector<std::string> notes;
};
ProductWeightReport product_weight_report(double alpha, const WeightSequence& gamma);

// sup_d (sum_{n>=L} lambda_{n,d}^{n^{-tau}})^{1/tau}
CriterionVerdict exp_spt_check(const SpectrumModel& model, const CriterionParams& params);
// sup_d d^{-tau1} (sum_{n>=ceil(H d^tau2)} lambda_{n,d}^{n^{-tau3}})^{1/tau3}
CriterionVerdict exp_pt_check(const SpectrumModel& model, const CriterionParams& params);
// inf 1/tau over tau with a certified bounded EXP-SPT sum
double exp_spt_exponent(const SpectrumModel& model, std::uint64_t L, int d_max, double tol = 1e-3,
                        SumOptions sums = {});

struct AnalyticExpReport {
  bool holds = false;
  double B = 0.0;           // sum_j 1/b_j
  double alpha_star = 0.0;  // liminf ln(a_j)/j
  std::vector<std::string> diagnostics;
};
// Throws Inconclusive when the sequences carry no decidable tail.
AnalyticExpReport analytic_exp_spt_criterion(const WeightSequence& a, const WeightSequence& b);

struct CountingCheck {
  int ell = 0;
  int d = 0;
  std::uint64_t count = 0;
  double bound = 0.0;
  bool ok = false;
};
struct SigmaBoundReport {
  double partial = 0.0;        // sum over h != 0 with r(h) < ell_sum + 1
  double partial_tail = kInf;  // bound on the omitted shells
  double upper = kInf;         // closed-form bound, +inf when the series bound diverges
  bool divergent_bound = false;
  int j_star = 0;
  double B = 0.0;
  double exponent = 0.0;  // B + ln3/delta
  std::vector<CountingCheck> counting;
  std::vector<std::string> diagnostics;
};
// r(h) = sum_j a_j |h_j|^{b_j}; Sigma = sum_{h != 0} r(h)^{-p}
SigmaBoundReport sigma_bound(const WeightSequence& a, const WeightSequence& b, double p, int d, double delta,
                             int ell_check = 20, int ell_sum = 2000);

// n(eps, d) from a small expression grammar over d and x = 1/eps:
// numbers, + * / ^, parentheses, exp(), log(), sqrt().
class GrowthModel {
 public:
  static GrowthModel parse(const std::string& expr);
  const std::string& expr() const { return expr_; }
  // natural log of n(eps, d)
  double log_eval(double inv_eps, double d) const;
  double log10_eval(double inv_eps, double d) const;

  struct Node;

 private:
  std::string expr_;
  std::shared_ptr<const Node> root_;
};

struct GrowthPathPoint {
  double inv_eps = 0.0;
  double d = 0.0;
  double ratio = 0.0;  // ln n / (d + 1/eps)
};

struct GrowthDiagnostics {
  std::vector<GrowthPathPoint> d_axis, eps_axis, diagonal;
  double diagonal_limit = 0.0;
  bool wt_passes = false;
  std::optional<double> q;  // polynomial degree in d
  std::optional<double> p;  // polynomial degree in 1/eps
  std::string pt_fit;
  struct Crossover {
    double eps = 0.0;
    int d = 0;
    std::vector<double> log10_values;  // one per model
  };
  std::vector<Crossover> crossover;
};

GrowthDiagnostics growth_model_diagnostics(const GrowthModel& gm,
                                           const std::vector<GrowthModel>& compare = {},
                                           const std::vector<std::pair<double, int>>& points = {});

namespace detail {
// Least-squares slope of ln(value) over d, skipping non-positive values.
std::optional<double> log_slope(const std::vector<PerDValue>& v, std::size_t from = 0);
}  // namespace detail

}  // namespace tractlab
