#include "tractlab/tfunc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "criteria_internal.hpp"

namespace tractlab {

const char* to_string(TFamily f) {
  switch (f) {
    case TFamily::ALG: return "ALG";
    case TFamily::EXP: return "EXP";
    case TFamily::QPT: return "QPT";
    case TFamily::Custom: return "Custom";
  }
  return "?";
}

int TractabilityFunctionSpec::s() const {
  switch (family) {
    case TFamily::ALG:
    case TFamily::EXP: return 2;
    case TFamily::QPT: return 1;
    case TFamily::Custom: return custom_params;
  }
  return 0;
}

double eval_T(const TractabilityFunctionSpec& spec, double inv_eps, int d, const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != spec.s())
    throw InvalidParameter(std::string(to_string(spec.family)) + " expects " + std::to_string(spec.s()) + " parameters");
  for (double v : p)
    if (!(v >= 0.0)) throw InvalidParameter("tractability parameters must be nonnegative");
  if (d < 1) throw InvalidParameter("dimension must be >= 1");
  if (!(inv_eps >= 0.0)) throw InvalidParameter("1/eps must be >= 0");
  const double x = std::max(1.0, inv_eps);  // inv_eps = 0 is the eps -> infinity limit
  const double dd = d;
  switch (spec.family) {
    case TFamily::ALG: return std::pow(dd, p[0]) * std::pow(x, p[1]);
    case TFamily::EXP: return std::pow(1.0 + std::log(x), p[1]) * std::pow(dd, p[0]);
    case TFamily::QPT: return std::exp(p[0] * (1.0 + std::log(dd)) * (1.0 + std::log(x)));
    case TFamily::Custom:
      if (!spec.custom) throw InvalidParameter("custom tractability function has no body");
      return spec.custom(inv_eps, d, p);
  }
  return 0.0;
}

// ------------------------------------------------------------------ validation

bool TValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

TGrid TGrid::default_for(const TractabilityFunctionSpec& spec) {
  TGrid g;
  g.inv_eps = {0.0, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3, 1e6};
  g.d = {1, 2, 3, 5, 10, 100, 1000};
  g.tau = {1.0, 1.5, 2.0, 3.0};
  // the eps-exponent stays positive: with it at zero T is constant in eps
  if (spec.family == TFamily::ALG || spec.family == TFamily::EXP)
    g.p = {{0.0, 0.5}, {0.5, 1.0}, {1.0, 2.0}, {2.0, 0.5}, {3.0, 3.0}};
  else
    for (double v : {0.5, 1.0, 2.0, 3.0}) g.p.push_back(std::vector<double>(spec.s(), v));
  return g;
}

namespace {

std::string point(double x, int d, const std::vector<double>& p) {
  std::ostringstream s;
  s << "inv_eps=" << x << ", d=" << d << ", p=(";
  for (std::size_t i = 0; i < p.size(); ++i) s << (i ? "," : "") << p[i];
  s << ")";
  return s.str();
}

bool geq(double a, double b) { return a >= b * (1.0 - 1e-12) || (std::isinf(a) && a > 0); }

}  // namespace

TValidationReport validate_T(const TractabilityFunctionSpec& spec, const TGrid& grid) {
  TValidationReport r;
  auto T = [&](double x, int d, const std::vector<double>& p) { return eval_T(spec, x, d, p); };
  std::vector<double> xs(grid.inv_eps);
  std::sort(xs.begin(), xs.end());
  std::vector<int> ds(grid.d);
  std::sort(ds.begin(), ds.end());

  AssumptionCheck mono{"non-decreasing in every argument", true, ""};
  auto fail = [](AssumptionCheck& c, const std::string& w) {
    if (c.passed) c.witness = w;
    c.passed = false;
  };
  for (const auto& p : grid.p)
    for (int d : ds)
      for (std::size_t i = 1; i < xs.size(); ++i)
        if (!geq(T(xs[i], d, p), T(xs[i - 1], d, p))) fail(mono, "1/eps increase at " + point(xs[i - 1], d, p));
  for (const auto& p : grid.p)
    for (double x : xs)
      for (std::size_t i = 1; i < ds.size(); ++i)
        if (!geq(T(x, ds[i], p), T(x, ds[i - 1], p))) fail(mono, "d increase at " + point(x, ds[i - 1], p));
  for (const auto& p : grid.p)
    for (double x : xs)
      for (int d : ds)
        for (std::size_t k = 0; k < p.size(); ++k) {
          auto q = p;
          q[k] += 0.5;
          if (!geq(T(x, d, q), T(x, d, p))) fail(mono, "p_" + std::to_string(k) + " increase at " + point(x, d, p));
        }
  r.checks.push_back(mono);

  AssumptionCheck unb{"T -> infinity as eps -> 0", true, ""};
  for (const auto& p : grid.p)
    for (int d : ds) {
      double prev = T(10.0, d, p);
      for (int k = 1; k <= 8; ++k) {
        const double x = std::pow(10.0, std::pow(2.0, k));
        const double v = T(x, d, p);
        if (std::isinf(prev) && std::isinf(v)) break;
        if (!(v > prev)) {
          fail(unb, "no growth at " + point(x, d, p));
          break;
        }
        prev = v;
      }
    }
  r.checks.push_back(unb);

  AssumptionCheck lim{"limit T(0,d,p) exists, equals the infimum and is >= T(0,1,0) > 0", true, ""};
  const double base = T(0.0, 1, std::vector<double>(spec.s(), 0.0));
  if (!(base > 0.0) || !std::isfinite(base)) fail(lim, "T(0,1,0) = " + std::to_string(base));
  for (const auto& p : grid.p)
    for (int d : ds) {
      const double L = T(0.0, d, p);
      if (!std::isfinite(L) || !(L > 0.0)) {
        fail(lim, "limit not finite and positive at " + point(0.0, d, p));
        continue;
      }
      if (std::fabs(T(1e-12, d, p) - L) > 1e-9 * L) fail(lim, "limit not approached at " + point(1e-12, d, p));
      if (!geq(L, base)) fail(lim, "limit below T(0,1,0) at " + point(0.0, d, p));
      for (double x : xs)
        if (!geq(T(x, d, p), L)) fail(lim, "value below the limit at " + point(x, d, p));
    }
  r.checks.push_back(lim);

  AssumptionCheck pw{"power condition T^tau <= K T(., ., tau p)", true, ""};
  for (double tau : grid.tau) {
    if (!(tau >= 1.0)) throw InvalidParameter("power-condition tau values must be >= 1");
    for (const auto& p : grid.p)
      for (double x : xs)
        for (int d : ds) {
          std::vector<double> tp(p);
          for (double& v : tp) v *= tau;
          const double lhs = std::log(T(x, d, p)) * tau, rhs = std::log(T(x, d, tp));
          const double k = std::exp(lhs - rhs);
          if (!std::isfinite(k)) {
            fail(pw, "no finite K at " + point(x, d, p) + ", tau=" + std::to_string(tau));
            continue;
          }
          r.K = std::max(r.K, k);
        }
  }
  r.checks.push_back(pw);
  return r;
}

TValidationReport validate_T(const TractabilityFunctionSpec& spec) { return validate_T(spec, TGrid::default_for(spec)); }

// ------------------------------------------------------------------ T-condition

using namespace detail;

CriterionVerdict t_condition_check(const SpectrumModel& model, const TractabilityFunctionSpec& spec,
                                   const std::vector<double>& p, double H, int d_max, SumOptions sums,
                                   double trend_threshold) {
  model.validate();
  if (!(H > 0.0)) throw InvalidParameter("H must be positive");
  if (d_max < 1) throw InvalidParameter("d_max must be >= 1");
  eval_T(spec, 1.0, 1, p);  // parameter validation
  const std::string name = std::string("t_condition_") + to_string(spec.family);

  if (spec.family == TFamily::Custom)
    return evaluate_criterion(name, d_max, [](int) -> PerDValue { throw Inconclusive("custom T", 0, 0); },
                              {Decision::Unknown, "no certified truncation for a custom tractability function"},
                              trend_threshold, false);

  auto start = [&spec, p, H](int d) { return ceil_index(H * eval_T(spec, 0.0, d, p)); };
  const double eps_exp = spec.family == TFamily::QPT ? p[0] : p[1];

  if (eps_exp == 0.0) {
    // every positive eigenvalue contributes 1/T(.,1,p), a constant
    const double w = 1.0 / eval_T(spec, 1.0, 1, p);
    return evaluate_criterion(
        name, d_max,
        [&](int d) {
          const CountResult c = count_above(model, d, 0.0, sums.term_cap);
          if (c.status == CountResult::Status::Infinite)
            throw Divergence("infinitely many positive eigenvalues, each contributing a constant", kInf);
          if (!c.exact()) throw ResourceLimit("positive eigenvalue count exceeds the cap", sums.term_cap);
          const std::uint64_t L = start(d);
          const double k = c.value >= L ? static_cast<double>(c.value - L + 1) : 0.0;
          return PerDValue{d, w * k, 0.0};
        },
        {}, trend_threshold);
  }

  if (spec.family == TFamily::ALG || spec.family == TFamily::QPT) {
    // 1/T(lambda^{-1/2}, 1, p) = c * min(1, lambda^{p/2}); c = 1 (ALG) or e^{-p} (QPT)
    PowerSumSpec s;
    s.tau = 0.5 * eps_exp;
    s.scale = spec.family == TFamily::QPT ? std::exp(-p[0]) : 1.0;
    s.start = start;
    s.start_exponent = p[0];
    s.clip = true;
    const AnalyticDecision dec = power_sum_decision(model, s);
    // slope of the sum is tau times the slope of its 1/tau-th root
    auto v = evaluate_criterion(
        name, d_max, [&](int d) { return power_sum_value(model, d, s, sums); }, dec, trend_threshold * s.tau);
    return v;
  }

  // EXP: 1/T = (1 + max(0, ln(1/lambda)/2))^{-p}
  const double pe = p[1];
  AnalyticDecision dec;
  if (algebraic_decay(model)) {
    dec = {Decision::Diverges, "eigenvalues decay algebraically: terms behave like (log n)^{-p}"};
  } else if (d_independent(model)) {
    dec = {Decision::Holds, "spectrum independent of d, so the per-d value is non-increasing"};
  } else if (model.kind == SpectrumModel::Kind::AnalyticKorobov) {
    try {
      const auto r = analytic_exp_spt_criterion(model.a, model.b);
      const double thr = r.B + std::log(3.0) / r.alpha_star + 1.0;
      if (r.holds && pe > thr * (1.0 + 1e-12))
        dec = {Decision::Holds, "analytic shell bound: p > B + ln3/alpha* + 1 = " + std::to_string(thr) +
                                    " gives a d-independent bound"};
    } catch (const Inconclusive&) {
    }
  }
  return evaluate_criterion(
      name, d_max,
      [&](int d) {
        const auto env = log_count_envelope(model, d);
        if (!env) throw Inconclusive("no count envelope for this model", 0, 0);
        const double nstar = envelope_rank(*env), A = env->A, B = env->B;
        StreamSumSpec s;
        s.start = start(d);
        s.term = [pe](std::uint64_t, double lv) { return std::pow(1.0 + std::max(0.0, -0.5 * lv), -pe); };
        s.tail = [=](std::uint64_t N, double) {
          if (B == 0.0 || static_cast<double>(N) <= nstar || !(pe > B)) return kInf;
          // (1 + y_n/2)^{-p} <= 2^p (n/A)^{-p/B}
          return std::exp(pe * std::log(2.0) + (pe / B) * std::log(A) +
                          std::log(hurwitz_zeta(pe / B, static_cast<double>(N) + 1.0)));
        };
        const TailSumResult r = stream_sum(model, d, s, sums);
        return PerDValue{d, r.value, r.tail_bound};
      },
      dec, trend_threshold);
}

}  // namespace tractlab
