#include "tractlab/criteria.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "criteria_internal.hpp"

namespace tractlab {

namespace {

constexpr const char* kCaveat =
    "evidence covers d <= d_max only; boundedness over all d rests on the stated basis";
const double kLn3 = std::log(3.0);

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(7);
  s << x;
  return s.str();
}

}  // namespace

void CriterionParams::validate() const {
  if (!(tau > 0.0)) throw InvalidParameter("tau must be positive");
  if (L < 1) throw InvalidParameter("L must be >= 1");
  if (!(tau1 >= 0.0) || !(tau2 >= 0.0)) throw InvalidParameter("tau1 and tau2 must be nonnegative");
  if (!(tau3 > 0.0)) throw InvalidParameter("tau3 must be positive");
  if (!(H > 0.0)) throw InvalidParameter("H must be positive");
  if (d_max < 1) throw InvalidParameter("d_max must be >= 1");
  for (double c : c_grid)
    if (!(c > 0.0)) throw InvalidParameter("c values must be positive");
}

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::HoldsUpToDmax: return "HoldsUpToDmax";
    case VerdictStatus::ViolatedAtD: return "ViolatedAtD";
    case VerdictStatus::DivergesForAllTestedParams: return "DivergesForAllTestedParams";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(TensorClass c) {
  switch (c) {
    case TensorClass::IntractableLambdaAboveOne: return "IntractableLambdaAboveOne";
    case TensorClass::IntractableDegenerateTop: return "IntractableDegenerateTop";
    case TensorClass::NoPTMaybeWT: return "NoPTMaybeWT";
    case TensorClass::WTPTSPTPossible: return "WTPTSPTPossible";
  }
  return "?";
}

// ------------------------------------------------------------------ shared machinery

namespace detail {

std::optional<double> log_slope(const std::vector<PerDValue>& v, std::size_t from) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = from; i < v.size(); ++i) {
    if (!(v[i].value > 0.0) || !std::isfinite(v[i].value)) continue;
    const double x = v[i].d, y = std::log(v[i].value);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

std::uint64_t ceil_index(double x) {
  if (!(x < 9.0e18)) throw ResourceLimit("start index exceeds the representable range", 0);
  const double c = std::ceil(x * (1.0 - 1e-14));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(c));
}

bool d_independent(const SpectrumModel& m) {
  return m.kind == SpectrumModel::Kind::Explicit && m.per_d.size() == 1;
}

bool algebraic_decay(const SpectrumModel& m) {
  using T = UnivariateSpectrum::Tail;
  switch (m.kind) {
    case SpectrumModel::Kind::Korobov:
    case SpectrumModel::Kind::WeightedKorobovProduct:
      return true;
    case SpectrumModel::Kind::TensorProduct:
      return m.univariate.tail() == T::PowerLaw;
    case SpectrumModel::Kind::Explicit:
      return std::any_of(m.per_d.begin(), m.per_d.end(), [](const auto& s) { return s.tail() == T::PowerLaw; });
    case SpectrumModel::Kind::AnalyticKorobov:
      return false;
  }
  return false;
}

double envelope_rank(const CountEnvelope& e) { return e.B == 0.0 ? e.A : e.A * std::pow(e.y1, e.B); }

CriterionVerdict evaluate_criterion(std::string name, int d_max, const PerDFn& f, const AnalyticDecision& dec,
                                    double trend_threshold, bool need_values) {
  CriterionVerdict v;
  v.criterion = std::move(name);
  v.caveat = kCaveat;
  const bool decided = dec.kind == Decision::Holds || dec.kind == Decision::Violated;
  bool diverged = false, stopped = false;
  if (dec.kind != Decision::Diverges && (need_values || !decided)) {
    for (int d = 1; d <= d_max; ++d) {
      try {
        v.per_d.push_back(f(d));
      } catch (const Divergence& e) {
        diverged = true;
        v.diagnostics.push_back("d=" + std::to_string(d) + ": " + e.what() + " (partial sum " + fmt(e.partial_sum) + ")");
        break;
      } catch (const ResourceLimit& e) {
        stopped = true;
        v.diagnostics.push_back("d=" + std::to_string(d) + ": " + e.what());
        break;
      } catch (const Inconclusive& e) {
        stopped = true;
        v.diagnostics.push_back("d=" + std::to_string(d) + ": " + e.what());
        break;
      }
    }
  }
  for (const auto& p : v.per_d) v.sup_estimate = std::max(v.sup_estimate, p.value + p.tail_bound);
  v.growth_slope = log_slope(v.per_d);

  auto mark_violated = [&] {
    v.status = VerdictStatus::ViolatedAtD;
    v.violated_d = v.per_d.empty() ? d_max : v.per_d.back().d;
    if (!v.per_d.empty()) v.certified_lower_bound = std::max(0.0, v.per_d.back().value - v.per_d.back().tail_bound);
  };

  if (diverged || dec.kind == Decision::Diverges) {
    v.status = VerdictStatus::DivergesForAllTestedParams;
    v.basis = dec.kind == Decision::Diverges ? dec.basis : "inner series diverges";
    return v;
  }
  if (decided) {
    v.basis = dec.basis;
    if (stopped) v.diagnostics.push_back("per-d evaluation incomplete; status rests on the analytic basis");
    if (dec.kind == Decision::Holds)
      v.status = VerdictStatus::HoldsUpToDmax;
    else
      mark_violated();
    return v;
  }
  if (dec.kind == Decision::Unknown || stopped) {
    v.status = VerdictStatus::Inconclusive;
    v.basis = !dec.basis.empty() ? dec.basis : "per-d evaluation incomplete";
    return v;
  }
  const std::size_t n = v.per_d.size();
  if (n < 3) {
    v.status = VerdictStatus::HoldsUpToDmax;
    v.basis = "too few d values for a trend; no growth observed";
    return v;
  }
  const auto hi = log_slope(v.per_d, std::min(n / 2, n - 2));
  if (hi && *hi > trend_threshold) {
    mark_violated();
    v.basis = "trend: exact per-d values grow, upper-half log slope " + fmt(*hi) + " > " + fmt(trend_threshold);
  } else {
    v.status = VerdictStatus::HoldsUpToDmax;
    v.basis = "trend: upper-half log slope " + (hi ? fmt(*hi) : std::string("n/a")) + " <= " + fmt(trend_threshold);
  }
  return v;
}

AnalyticDecision power_sum_decision(const SpectrumModel& m, const PowerSumSpec& s) {
  const double damp_on_sum = s.damp / s.root;
  switch (m.kind) {
    case SpectrumModel::Kind::Explicit:
      if (d_independent(m)) {
        try {
          m.per_d.front().log_power_sum(s.tau, 1);
        } catch (const Divergence&) {
          return {Decision::Diverges, "the d-independent series sum lambda_n^tau diverges"};
        }
        return {Decision::Holds, "spectrum independent of d, so the per-d value is non-increasing"};
      }
      return {};
    case SpectrumModel::Kind::TensorProduct: {
      if (exceeds(m.univariate.log_at(1), 0.0)) return {};
      double ls;
      try {
        ls = m.univariate.log_power_sum(s.tau, 1);
      } catch (const Divergence&) {
        return {};
      }
      if (!exceeds(ls, 0.0)) return {Decision::Holds, "univariate power sum <= 1, so the d-fold sum stays <= 1"};
      return {Decision::Violated, "univariate power sum " + fmt(std::exp(ls)) + " > 1: the d-fold sum grows geometrically"};
    }
    case SpectrumModel::Kind::Korobov:
    case SpectrumModel::Kind::WeightedKorobovProduct: {
      if (!(2.0 * m.alpha * s.tau > 1.0)) return {Decision::Diverges, "2*alpha*tau <= 1: univariate zeta series diverges"};
      const WeightSequence w = m.weights();
      if (s.clip && w.at(1) > 1.0) return {};
      const auto summable = w.power_summable(s.tau);
      if (!summable) return {};
      if (*summable) return {Decision::Holds, "sum_j gamma_j^tau < inf: the closed-form product is bounded in d"};
      if (w.kind() == WeightSequence::Kind::Power && std::fabs(w.param() * s.tau - 1.0) < 1e-12) {
        // prod_j (1 + K/j) lies between e^{-K^2 pi^2/12} d^K and e^K d^K
        const double K = 2.0 * zeta(2.0 * m.alpha * s.tau) * std::pow(w.scale(), s.tau);
        if (K <= damp_on_sum * (1.0 + 1e-12))
          return {Decision::Holds, "borderline weights: sum grows like d^" + fmt(K) + ", absorbed by the d-damping"};
        if (w.scale() <= 1.0 && K > damp_on_sum && K > s.start_exponent)
          return {Decision::Violated, "borderline weights: sum grows like d^" + fmt(K) + ", faster than the damping"};
        return {};
      }
      return {Decision::Violated, "sum_j gamma_j^tau = inf: the closed-form product grows faster than any power of d"};
    }
    case SpectrumModel::Kind::AnalyticKorobov: {
      const auto e = m.a.exp_summable();
      if (!e) return {};
      if (*e) return {Decision::Holds, "sum_j omega^{tau a_j} < inf: the closed-form product is bounded in d"};
      const auto k = m.a.kind();
      if (k == WeightSequence::Kind::Constant || k == WeightSequence::Kind::Explicit)
        return {Decision::Violated, "a_j bounded: every coordinate factor exceeds a fixed constant > 1"};
      return {};
    }
  }
  return {};
}

PerDValue power_sum_value(const SpectrumModel& m, int d, const PowerSumSpec& s, const SumOptions& o) {
  const std::uint64_t L = s.start(d);
  const TailSumResult r = tail_power_sum(m, d, s.tau, L, o);
  double S = r.value;
  if (s.clip && log_lambda_max(m, d) > 0.0) {
    const CountResult c = count_above(m, d, 1.0, o.term_cap);
    if (!c.exact()) throw ResourceLimit("too many eigenvalues above one", 0);
    const auto vals = eigenvalue_stream(m, d, c.value, {o.node_budget}).values;
    for (std::size_t k = 0; k < vals.size(); ++k)
      if (k + 1 >= L && vals[k].log_value > 0.0) S -= std::expm1(s.tau * vals[k].log_value);
    S = std::max(S, 0.0);
  }
  const double f = s.scale * std::pow(static_cast<double>(d), -s.damp);
  PerDValue p;
  p.d = d;
  p.value = f * std::pow(S, s.root);
  p.tail_bound = r.tail_bound > 0.0 ? f * (std::pow(S + r.tail_bound, s.root) - std::pow(S, s.root)) : 0.0;
  return p;
}

TailSumResult stream_sum(const SpectrumModel& m, int d, const StreamSumSpec& s, const SumOptions& o) {
  EigenStream st(m, d, {o.node_budget});
  double sum = 0.0;
  std::uint64_t n = 0;
  std::uint64_t next_check = std::max<std::uint64_t>(64, s.start);
  while (true) {
    const auto v = st.next();
    if (!v) return {sum, 0.0, true};
    ++n;
    if (n >= s.start) sum += s.term(n, v->log_value);
    if (n >= next_check || n >= o.term_cap) {
      const double tb = s.tail(n, v->log_value);
      const bool at_cap = n >= o.term_cap;
      if (std::isfinite(tb) && (tb <= o.tolerance * sum || at_cap)) return {sum, tb, false};
      if (at_cap) throw Inconclusive("tail bound not certifiable within the term cap", n, n);
      next_check = std::min<std::uint64_t>(next_check * 2, o.term_cap);
    }
  }
}

}  // namespace detail

using namespace detail;

// ------------------------------------------------------------------ ALG checks

namespace {

PowerSumSpec pt_spec(const CriterionParams& p) {
  PowerSumSpec s;
  s.tau = p.tau3;
  s.damp = p.tau1;
  s.root = 1.0 / p.tau3;
  const double H = p.H, t2 = p.tau2;
  s.start = [H, t2](int d) { return ceil_index(H * std::pow(static_cast<double>(d), t2)); };
  s.start_exponent = p.tau2;
  return s;
}

CriterionVerdict run_power(const char* name, const SpectrumModel& m, const PowerSumSpec& s, const CriterionParams& p,
                           bool need_values) {
  m.validate();
  p.validate();
  const AnalyticDecision dec = power_sum_decision(m, s);
  auto v = evaluate_criterion(
      name, p.d_max, [&](int d) { return power_sum_value(m, d, s, p.sums); }, dec, p.trend_threshold, need_values);
  if (m.is_product() && m.kind != SpectrumModel::Kind::AnalyticKorobov && !v.per_d.empty())
    v.diagnostics.push_back("per-d values from the closed-form product");
  return v;
}

}  // namespace

CriterionVerdict alg_pt_check(const SpectrumModel& model, const CriterionParams& params) {
  return run_power("alg_pt", model, pt_spec(params), params, true);
}

CriterionVerdict alg_spt_check(const SpectrumModel& model, const CriterionParams& params) {
  CriterionParams p = params;
  p.tau1 = 0.0;
  p.tau2 = 0.0;
  p.tau3 = params.tau;
  p.H = static_cast<double>(params.L);
  auto v = run_power("alg_spt", model, pt_spec(p), p, true);
  return v;
}

double alg_spt_exponent(const SpectrumModel& model, std::uint64_t L, int d_max, double tol, SumOptions sums) {
  if (!(tol > 0.0)) throw InvalidParameter("tolerance must be positive");
  CriterionParams p;
  p.L = L;
  p.d_max = d_max;
  p.sums = sums;
  auto holds = [&](double tau) {
    p.tau = tau;
    p.tau3 = tau;
    p.H = static_cast<double>(L);
    return run_power("alg_spt", model, pt_spec(p), p, false).holds();
  };
  double lo = model.is_korobov() ? 1.0 / (4.0 * model.alpha) + 1e-6 : 1e-6;
  double hi = 64.0;
  if (!holds(hi)) return kInf;
  if (holds(lo)) return 2.0 * lo;
  while (2.0 * (hi - lo) > tol) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return 2.0 * hi;
}

// ------------------------------------------------------------------ WT

namespace {

// Sum over lambda <= e^{lv} of exp(-c lambda^{-1/2}) via lambda^sigma weighting.
double wt_tail(const SpectrumModel& m, int d, double c, double lv) {
  const double x = std::exp(-0.5 * lv);
  const double smax = 0.5 * c * x;
  double best = kInf;
  for (int k = 1; k <= 64; ++k) {
    const double sigma = smax * k / 64.0;
    const double u = power_sum_upper(m, d, sigma);
    if (!std::isfinite(u) || !(u > 0.0)) continue;
    best = std::min(best, std::exp(std::log(u) - sigma * lv - c * x));
  }
  return best;
}

// Unweighted Korobov: lambda^{-1/2} = m^alpha with m = prod max(1,|h_j|); counts by Dirichlet convolution.
std::vector<PerDValue> korobov_wt_values(const SpectrumModel& model, double c, int d_max, const SumOptions& o) {
  const double alpha = model.alpha;
  std::size_t M = 64;
  while (true) {
    std::vector<double> N1(M + 1, 2.0), Nd;
    N1[0] = 0.0;
    N1[1] = 3.0;
    Nd = N1;
    std::vector<PerDValue> out;
    bool ok = true;
    for (int d = 1; d <= d_max; ++d) {
      if (d > 1) {
        std::vector<double> C(M + 1, 0.0);
        for (std::size_t i = 1; i <= M; ++i)
          if (Nd[i] != 0.0)
            for (std::size_t j = 1; i * j <= M; ++j) C[i * j] += Nd[i] * N1[j];
        Nd.swap(C);
      }
      double sum = 0.0;
      for (std::size_t k = M; k >= 1; --k) sum += Nd[k] * std::exp(-c * std::pow(static_cast<double>(k), alpha));
      const double tail = wt_tail(model, d, c, -2.0 * alpha * std::log(M + 1.0));
      if (!(tail <= o.tolerance * sum)) {
        ok = false;
        break;
      }
      const double damp = std::exp(-c * d);
      out.push_back({d, damp * sum, damp * tail});
    }
    if (ok) return out;
    if (M >= (std::size_t{1} << 22)) throw Inconclusive("WT sum truncation not certifiable", M, M);
    M *= 4;
  }
}

CriterionVerdict wt_for_c(const SpectrumModel& m, double c, const CriterionParams& p) {
  const std::string name = "alg_wt";
  if (m.kind == SpectrumModel::Kind::Korobov) {
    std::vector<PerDValue> vals;
    std::string err;
    try {
      vals = korobov_wt_values(m, c, p.d_max, p.sums);
    } catch (const Inconclusive& e) {
      err = e.what();
    }
    AnalyticDecision dec;
    if (c < kLn3)
      dec = {Decision::Violated, "3^d eigenvalues equal 1, so the value is >= 3^d e^{-c(d+1)}, unbounded for c < ln 3"};
    auto v = evaluate_criterion(
        name, p.d_max,
        [&](int d) {
          if (d > static_cast<int>(vals.size())) throw Inconclusive(err.empty() ? "missing value" : err, 0, 0);
          return vals[d - 1];
        },
        dec, p.trend_threshold);
    if (v.status == VerdictStatus::ViolatedAtD && c < kLn3) {
      const int d = v.violated_d;
      v.certified_lower_bound = std::max(v.certified_lower_bound, std::exp(d * kLn3 - c * (d + 1.0)));
    }
    return v;
  }
  AnalyticDecision dec;
  if (d_independent(m)) dec = {Decision::Holds, "spectrum independent of d; e^{-cd} damping makes the value decrease"};
  return evaluate_criterion(
      name, p.d_max,
      [&](int d) {
        StreamSumSpec s;
        s.term = [c](std::uint64_t, double lv) { return std::exp(-c * std::exp(-0.5 * lv)); };
        s.tail = [&m, d, c](std::uint64_t, double lv) { return wt_tail(m, d, c, lv); };
        const TailSumResult r = stream_sum(m, d, s, p.sums);
        const double damp = std::exp(-c * d);
        return PerDValue{d, damp * r.value, damp * r.tail_bound};
      },
      dec, p.trend_threshold);
}

}  // namespace

CriterionVerdict alg_wt_check(const SpectrumModel& model, const CriterionParams& params) {
  model.validate();
  params.validate();
  if (params.c_grid.empty()) throw InvalidParameter("c grid is empty");
  CriterionVerdict out;
  out.criterion = "alg_wt";
  out.caveat = kCaveat;
  std::vector<CriterionVerdict> per_c;
  for (double c : params.c_grid) {
    per_c.push_back(wt_for_c(model, c, params));
    const auto& v = per_c.back();
    out.traces.push_back({c, v.status, v.per_d, v.growth_slope, v.violated_d, v.certified_lower_bound, v.basis});
    for (const auto& dgn : v.diagnostics) out.diagnostics.push_back("c=" + fmt(c) + ": " + dgn);
  }
  auto pick = [&](VerdictStatus s) -> int {
    for (std::size_t i = 0; i < per_c.size(); ++i)
      if (per_c[i].status == s) return static_cast<int>(i);
    return -1;
  };
  int i = pick(VerdictStatus::ViolatedAtD);
  if (i < 0) i = pick(VerdictStatus::DivergesForAllTestedParams);
  if (i < 0) i = pick(VerdictStatus::Inconclusive);
  if (i < 0) i = 0;
  const auto& v = per_c[i];
  out.status = v.status;
  out.violated_d = v.violated_d;
  out.certified_lower_bound = v.certified_lower_bound;
  out.per_d = v.per_d;
  out.growth_slope = v.growth_slope;
  out.basis = "c=" + fmt(params.c_grid[i]) + ": " + v.basis;
  for (const auto& t : per_c) out.sup_estimate = std::max(out.sup_estimate, t.sup_estimate);
  return out;
}

// ------------------------------------------------------------------ tensor / product weights

TensorClassification tensor_classify(const UnivariateSpectrum& univ) {
  const double l1 = univ.log_at(1), l2 = univ.log_at(2);
  if (l1 == kNegInf) throw InvalidParameter("tensor classification needs a nonzero univariate spectrum");
  TensorClassification r;
  r.lambda1 = std::exp(l1);
  r.lambda2 = std::exp(l2);
  if (exceeds(l1, 0.0)) {
    r.label = TensorClass::IntractableLambdaAboveOne;
  } else if (!exceeds(0.0, l1)) {
    r.label = (l2 != kNegInf && !exceeds(0.0, l2)) ? TensorClass::IntractableDegenerateTop : TensorClass::NoPTMaybeWT;
  } else {
    r.label = TensorClass::WTPTSPTPossible;
  }
  if (r.label == TensorClass::NoPTMaybeWT)
    r.caveat = "WT depends on the decay of the univariate eigenvalues; use the WT check to decide it";
  if (r.label == TensorClass::WTPTSPTPossible)
    r.caveat = "which notions hold depends on the decay of the univariate eigenvalues";
  return r;
}

ProductWeightReport product_weight_report(double alpha, const WeightSequence& gamma) {
  if (!(alpha > 0.5)) throw InvalidParameter("alpha must exceed 1/2");
  if (!gamma.non_increasing()) throw InvalidParameter("product weights must be non-increasing");
  ProductWeightReport r;
  switch (gamma.kind()) {
    case WeightSequence::Kind::Power:
      r.p_gamma = gamma.scale() == 0.0 ? 0.0 : (gamma.param() > 0.0 ? 1.0 / gamma.param() : kInf);
      break;
    case WeightSequence::Kind::Geometric:
      r.p_gamma = (gamma.param() < 1.0 || gamma.scale() == 0.0) ? 0.0 : kInf;
      break;
    case WeightSequence::Kind::Constant:
      r.p_gamma = gamma.scale() == 0.0 ? 0.0 : kInf;
      break;
    case WeightSequence::Kind::Explicit: {
      const auto& v = gamma.values();
      if (!gamma.repeat_last() || v.empty() || v.back() == 0.0) {
        r.p_gamma = 0.0;
        r.notes.push_back("finitely many positive weights: p_gamma = 0");
      } else {
        r.p_gamma = kInf;
        r.notes.push_back("list repeats its last positive entry: no power of the weights is summable");
      }
      break;
    }
  }
  r.spt = r.pt = std::isfinite(r.p_gamma);
  if (r.spt) r.spt_exponent = 2.0 * std::max(1.0 / (2.0 * alpha), r.p_gamma);
  r.wt = gamma.infimum() < 1.0;
  return r;
}

// ------------------------------------------------------------------ EXP checks

AnalyticExpReport analytic_exp_spt_criterion(const WeightSequence& a, const WeightSequence& b) {
  AnalyticExpReport r;
  switch (b.kind()) {
    case WeightSequence::Kind::Power:
      r.B = b.param() < -1.0 ? zeta(-b.param()) / b.scale() : kInf;
      break;
    case WeightSequence::Kind::Geometric:
      r.B = b.param() > 1.0 ? 1.0 / (b.scale() * (b.param() - 1.0)) : kInf;
      break;
    case WeightSequence::Kind::Constant:
      r.B = kInf;
      break;
    case WeightSequence::Kind::Explicit:
      if (!b.repeat_last()) throw Inconclusive("b given as a finite list: sum of 1/b_j undecidable", 0, 0);
      r.B = kInf;
      break;
  }
  switch (a.kind()) {
    case WeightSequence::Kind::Geometric:
      r.alpha_star = std::log(a.param());
      break;
    case WeightSequence::Kind::Power:
    case WeightSequence::Kind::Constant:
      r.alpha_star = 0.0;
      break;
    case WeightSequence::Kind::Explicit:
      if (!a.repeat_last()) throw Inconclusive("a given as a finite list: liminf undecidable", 0, 0);
      r.alpha_star = 0.0;
      break;
  }
  r.holds = std::isfinite(r.B) && r.alpha_star > 0.0;
  r.diagnostics.push_back("B = sum_j 1/b_j = " + fmt(r.B));
  r.diagnostics.push_back("alpha* = liminf ln(a_j)/j = " + fmt(r.alpha_star));
  if (r.holds)
    r.diagnostics.push_back("exponent bracket: " + fmt(std::max(r.B, kLn3 / r.alpha_star)) + " <= p* <= " +
                            fmt(r.B + kLn3 / r.alpha_star));
  return r;
}

namespace {

AnalyticDecision exp_decision(const SpectrumModel& m, double tau, bool spt) {
  if (algebraic_decay(m))
    return {Decision::Diverges, "eigenvalues decay algebraically in n, so lambda_n^{n^-tau} -> 1 and the series diverges"};
  if (d_independent(m)) return {Decision::Holds, "spectrum independent of d, so the per-d value is non-increasing"};
  if (m.kind != SpectrumModel::Kind::AnalyticKorobov) return {};
  AnalyticExpReport r;
  try {
    r = analytic_exp_spt_criterion(m.a, m.b);
  } catch (const Inconclusive& e) {
    return {Decision::Unknown, e.what()};
  }
  if (!r.holds) {
    if (spt) return {Decision::Violated, "analytic EXP-SPT criterion fails (sum 1/b_j = inf or alpha* = 0)"};
    return {Decision::Unknown, "analytic EXP-SPT criterion fails; EXP-PT is not decided by it"};
  }
  const double up = r.B + kLn3 / r.alpha_star, low = std::max(r.B, kLn3 / r.alpha_star);
  if (1.0 / tau > up * (1.0 + 1e-12))
    return {Decision::Holds, "1/tau = " + fmt(1.0 / tau) + " exceeds the exponent bound B + ln3/alpha* = " + fmt(up)};
  if (spt && 1.0 / tau < low * (1.0 - 1e-12))
    return {Decision::Violated, "1/tau = " + fmt(1.0 / tau) + " is below the exponent lower bound " + fmt(low)};
  return {Decision::Unknown, "1/tau lies between the exponent bounds " + fmt(low) + " and " + fmt(up)};
}

// sum_{n >= start} lambda_n^{n^{-tau}} with the count-envelope tail
TailSumResult exp_sum(const SpectrumModel& m, int d, double tau, std::uint64_t start, const SumOptions& o) {
  const auto env = log_count_envelope(m, d);
  if (!env) throw Inconclusive("no count envelope for this model", 0, 0);
  const double nstar = envelope_rank(*env);
  const double B = env->B, A = env->A;
  StreamSumSpec s;
  s.start = start;
  s.term = [tau](std::uint64_t n, double lv) { return std::exp(std::pow(static_cast<double>(n), -tau) * lv); };
  s.tail = [=](std::uint64_t N, double) {
    if (B == 0.0 || static_cast<double>(N) <= nstar) return kInf;
    const double r = 1.0 / B - tau;
    if (!(r > 0.0)) return kInf;
    // terms past N are <= exp(-kappa n^r); integral bound (1/r) kappa^{-1/r} Gamma(1/r, kappa N^r)
    const double lk = -std::log(A) / B;
    const double a = 1.0 / r, x = std::exp(lk + r * std::log(static_cast<double>(N)));
    const double q = boost::math::gamma_q(a, x);
    if (q == 0.0) return std::numeric_limits<double>::min();
    return std::exp(std::log(a) - a * lk + boost::math::lgamma(a) + std::log(q));
  };
  return stream_sum(m, d, s, o);
}

CriterionVerdict run_exp(const char* name, const SpectrumModel& m, double tau, double tau1, double tau2, double H,
                         const CriterionParams& p, bool spt, bool need_values) {
  m.validate();
  p.validate();
  const AnalyticDecision dec = exp_decision(m, tau, spt);
  auto v = evaluate_criterion(
      name, p.d_max,
      [&](int d) {
        const std::uint64_t start = ceil_index(H * std::pow(static_cast<double>(d), tau2));
        const TailSumResult r = exp_sum(m, d, tau, start, p.sums);
        const double f = std::pow(static_cast<double>(d), -tau1), root = 1.0 / tau;
        PerDValue pv{d, f * std::pow(r.value, root), 0.0};
        if (r.tail_bound > 0.0) pv.tail_bound = f * (std::pow(r.value + r.tail_bound, root) - std::pow(r.value, root));
        return pv;
      },
      dec, p.trend_threshold, need_values);
  if (dec.kind == Decision::Diverges && need_values) {
    // show how far a capped partial sum gets at d = 1
    double partial = 0.0;
    try {
      EigenStream st(m, 1, {p.sums.node_budget});
      for (std::uint64_t n = 1; n <= 10000; ++n) {
        const auto e = st.next();
        if (!e) break;
        if (n >= static_cast<std::uint64_t>(std::ceil(H))) partial += std::exp(std::pow(static_cast<double>(n), -tau) * e->log_value);
      }
      v.diagnostics.push_back("d=1 partial sum over 10000 terms: " + fmt(partial));
    } catch (const ResourceLimit&) {
    }
  }
  return v;
}

}  // namespace

CriterionVerdict exp_spt_check(const SpectrumModel& model, const CriterionParams& params) {
  return run_exp("exp_spt", model, params.tau, 0.0, 0.0, static_cast<double>(params.L), params, true, true);
}

CriterionVerdict exp_pt_check(const SpectrumModel& model, const CriterionParams& params) {
  return run_exp("exp_pt", model, params.tau3, params.tau1, params.tau2, params.H, params, false, true);
}

double exp_spt_exponent(const SpectrumModel& model, std::uint64_t L, int d_max, double tol, SumOptions sums) {
  if (!(tol > 0.0)) throw InvalidParameter("tolerance must be positive");
  CriterionParams p;
  p.L = L;
  p.d_max = d_max;
  p.sums = sums;
  auto holds = [&](double pe) {
    p.tau = 1.0 / pe;
    return run_exp("exp_spt", model, p.tau, 0.0, 0.0, static_cast<double>(L), p, true, false).holds();
  };
  double lo = 1.0 / 64.0, hi = 1e3;
  if (!holds(hi)) return kInf;
  if (holds(lo)) return lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ------------------------------------------------------------------ sigma bound

SigmaBoundReport sigma_bound(const WeightSequence& a, const WeightSequence& b, double p, int d, double delta,
                             int ell_check, int ell_sum) {
  if (d < 1) throw InvalidParameter("dimension must be >= 1");
  if (!(p > 0.0)) throw InvalidParameter("p must be positive");
  if (ell_check < 0 || ell_sum < ell_check) throw InvalidParameter("need 0 <= ell_check <= ell_sum");
  std::vector<double> av(d), bv(d);
  for (int j = 0; j < d; ++j) {
    av[j] = a.at(j + 1);
    bv[j] = b.at(j + 1);
    if (!(av[j] > 0.0) || !(bv[j] > 0.0)) throw InvalidParameter("a_j and b_j must be positive");
  }
  SigmaBoundReport r;

  // all h with r(h) < R, by coordinate-wise radii
  const double R = ell_sum + 1.0;
  std::vector<double> radii;
  std::uint64_t visited = 0;
  auto rec = [&](auto&& self, int j, double acc) -> void {
    if (j == d) {
      radii.push_back(acc);
      return;
    }
    for (std::int64_t h = 0;; ++h) {
      const double t = acc + (h == 0 ? 0.0 : av[j] * std::pow(static_cast<double>(h), bv[j]));
      if (!(t < R)) break;
      if (++visited > 50'000'000) throw ResourceLimit("shell enumeration exceeded its budget", visited);
      self(self, j + 1, t);
      if (h > 0) self(self, j + 1, t);  // -h
    }
  };
  rec(rec, 0, 0.0);
  std::sort(radii.begin(), radii.end());
  for (auto it = radii.rbegin(); it != radii.rend(); ++it)
    if (*it > 0.0) r.partial += std::pow(*it, -p);

  const double a1 = av[0];
  const int l0 = static_cast<int>(std::floor(a1));
  // N(ell, d) = #{h : r(h) < ell + 1}; the bound is filled in below when available
  for (int ell = l0; ell <= ell_check; ++ell) {
    const auto cnt = static_cast<std::uint64_t>(
        std::lower_bound(radii.begin(), radii.end(), ell + 1.0) - radii.begin());
    r.counting.push_back({ell, d, cnt, kInf, true});
  }
  AnalyticExpReport crit;
  bool have = false;
  try {
    crit = analytic_exp_spt_criterion(a, b);
    have = crit.holds;
    if (!crit.holds) r.diagnostics.push_back("analytic criterion fails; no counting bound available");
  } catch (const Inconclusive& e) {
    r.diagnostics.push_back(e.what());
  }
  if (!have) return r;
  if (!(delta > 0.0 && delta < crit.alpha_star)) throw InvalidParameter("delta must lie in (0, alpha*)");
  if (a.kind() != WeightSequence::Kind::Geometric) {
    r.diagnostics.push_back("j*_delta only available for geometric a");
    return r;
  }
  // a_j = s q^j >= e^{delta j}  <=>  ln s + j (ln q - delta) >= 0, monotone in j
  const double ls = std::log(a.scale()), slope = std::log(a.param()) - delta;
  int js = 1;
  if (ls < 0.0) js = std::max(1, static_cast<int>(std::ceil(-ls / slope)));
  while (js > 1 && ls + (js - 1) * slope >= 0.0) --js;
  r.j_star = js;
  r.B = crit.B;
  r.exponent = crit.B + kLn3 / delta;
  const double logC = js * kLn3 - crit.B * std::log(a1);
  auto count_bound = [&](double ell) { return std::exp(logC + r.exponent * std::log(ell + 1.0)); };

  for (auto& c : r.counting) {
    c.bound = count_bound(c.ell);
    c.ok = static_cast<double>(c.count) <= c.bound * (1.0 + 1e-12);
  }

  const double gap = p - r.exponent;
  if (!(gap > 1.0)) {
    r.divergent_bound = true;
    r.diagnostics.push_back("p <= B + ln3/delta + 1: the closed-form bound diverges");
    return r;
  }
  // sum_{ell >= l0} (ell+1)^E / max{a1, ell}^p, explicit head then a Hurwitz tail
  const int Lc = l0 + 1000;
  double head = 0.0;
  for (int ell = Lc; ell >= l0; --ell)
    head += std::exp(r.exponent * std::log(ell + 1.0) - p * std::log(std::max(a1, static_cast<double>(ell))));
  auto tail_from = [&](double start) {  // sum_{ell >= start} (ell+1)^E ell^{-p}, start >= max(1, a1)
    return std::pow(1.0 + 1.0 / start, r.exponent) * hurwitz_zeta(p - r.exponent, start);
  };
  r.upper = std::exp(logC) * (head + tail_from(Lc + 1.0));
  r.partial_tail = std::exp(logC) * tail_from(std::max(R, a1));
  return r;
}

}  // namespace tractlab
