#include "tractlab/complexity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace tractlab {

const char* to_string(ErrorCriterion c) { return c == ErrorCriterion::ABS ? "ABS" : "NOR"; }
const char* to_string(Setting s) { return s == Setting::WORST ? "WORST" : "AVG"; }

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidParameter("epsilon must be positive and finite");
}

std::uint64_t unwrap(const CountResult& c) {
  if (c.status == CountResult::Status::Overflow)
    throw ResourceLimit("eigenvalue count exceeds the configured cap", 0);
  if (c.status == CountResult::Status::Infinite)
    throw Divergence("infinitely many eigenvalues exceed the threshold", kInf);
  return c.value;
}

}  // namespace

std::uint64_t n_worst(const ComplexityQuery& q, std::vector<std::string>* warnings, const ComplexityOptions& opts) {
  check_eps(q.eps);
  double log_t = 2.0 * std::log(q.eps);
  if (q.criterion == ErrorCriterion::NOR) {
    const double l1 = log_lambda_max(q.model, q.d);
    if (l1 == kNegInf) {
      if (warnings) warnings->push_back("degenerate problem: zero operator under NOR, n = 0 by convention");
      return 0;
    }
    log_t += l1;
  }
  return unwrap(count_above_log(q.model, q.d, log_t, opts.count_cap));
}

std::vector<double> optimal_error_curve(const SpectrumModel& model, int d, std::uint64_t n_max, StreamOptions opts) {
  std::vector<double> e(n_max + 1, 0.0);
  EigenStream st(model, d, opts);
  for (std::uint64_t i = 0; i <= n_max; ++i) {
    auto v = st.next();
    if (!v) break;
    e[i] = std::exp(0.5 * v->log_value);
  }
  return e;
}

double avg_log_error(const SpectrumModel& model, int d, std::uint64_t n, SumOptions opts) {
  if (model.kind == SpectrumModel::Kind::Explicit) return 0.5 * model.spectrum_for(d).log_power_sum(1.0, n + 1);
  const TailSumResult r = tail_power_sum(model, d, 1.0, n + 1, opts);
  return r.value > 0.0 ? 0.5 * std::log(r.value) : kNegInf;
}

double avg_error(const SpectrumModel& model, int d, std::uint64_t n, SumOptions opts) {
  return std::exp(avg_log_error(model, d, n, opts));
}

namespace {

std::uint64_t n_avg_explicit(const UnivariateSpectrum& s, double eps, ErrorCriterion criterion) {
  double target = 2.0 * std::log(eps);
  if (criterion == ErrorCriterion::NOR) {
    const double trace = s.log_power_sum(1.0, 1);
    if (trace == kNegInf) return 0;
    target += trace;
  }
  auto ok = [&](std::uint64_t n) { return !exceeds(s.log_power_sum(1.0, n + 1), target); };
  if (ok(0)) return 0;
  std::uint64_t lo = 0, hi = 1;  // ok(lo) false
  while (!ok(hi)) {
    lo = hi;
    if (hi > (std::uint64_t{1} << 62)) throw ResourceLimit("average-case search exceeded index range", lo);
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

std::uint64_t n_avg(const SpectrumModel& model, int d, double eps, ErrorCriterion criterion,
                    const ComplexityOptions& opts) {
  check_eps(eps);
  model.validate();
  if (model.kind == SpectrumModel::Kind::Explicit) return n_avg_explicit(model.spectrum_for(d), eps, criterion);

  SumOptions so = opts.sums;
  TailSumResult trace = tail_power_sum(model, d, 1.0, 1, so);
  const double e2 = eps * eps;
  auto target_lo = [&] { return criterion == ErrorCriterion::NOR ? e2 * trace.value : e2; };
  auto target_hi = [&] { return criterion == ErrorCriterion::NOR ? e2 * (trace.value + trace.tail_bound) : e2; };

  // 0: holds, 1: fails, 2: straddles
  auto decide = [&](double partial) {
    const double lo = std::max(0.0, trace.value - partial);
    const double hi = trace.value + trace.tail_bound - partial;
    if (trace.tail_bound == 0.0) {
      if (lo <= 0.0) return 0;
      return exceeds(std::log(lo), std::log(target_lo())) ? 1 : 0;
    }
    if (hi <= target_lo()) return 0;
    if (lo > target_hi()) return 1;
    return 2;
  };

  EigenStream st(model, d, {so.node_budget});
  double partial = 0.0;
  std::uint64_t n = 0;
  std::uint64_t straddle_from = 0;
  bool straddling = false;
  while (true) {
    int verdict = decide(partial);
    for (int step = 0; verdict == 2 && !straddling && step < opts.refine_steps; ++step) {
      so.tolerance *= 1e-2;
      trace = tail_power_sum(model, d, 1.0, 1, so);
      verdict = decide(partial);
    }
    if (verdict == 0) {
      if (straddling) throw Inconclusive("average-case complexity bracket unresolved", straddle_from, n);
      return n;
    }
    if (verdict == 2 && !straddling) {
      straddling = true;
      straddle_from = n;
    }
    auto v = st.next();
    if (!v) {
      if (straddling) throw Inconclusive("average-case complexity bracket unresolved", straddle_from, n);
      return n;
    }
    partial += v->value();
    ++n;
    if (n > so.term_cap) {
      if (straddling) throw Inconclusive("average-case complexity bracket unresolved at the term cap", straddle_from, n);
      throw ResourceLimit("average-case search exceeded the term cap", n);
    }
  }
}

std::uint64_t n_query(const ComplexityQuery& q, std::vector<std::string>* warnings, const ComplexityOptions& opts) {
  if (q.setting == Setting::WORST) return n_worst(q, warnings, opts);
  return n_avg(q.model, q.d, q.eps, q.criterion, opts);
}

ComplexityTable complexity_table(const SpectrumModel& model, const std::vector<int>& ds, const std::vector<double>& eps,
                                 ErrorCriterion criterion, Setting setting, std::vector<std::string>* warnings,
                                 const ComplexityOptions& opts) {
  if (ds.empty() || eps.empty()) throw InvalidParameter("complexity grid is empty");
  std::vector<int> dd(ds);
  std::vector<double> ee(eps);
  std::sort(dd.begin(), dd.end());
  dd.erase(std::unique(dd.begin(), dd.end()), dd.end());
  std::sort(ee.begin(), ee.end(), std::greater<>());
  ee.erase(std::unique(ee.begin(), ee.end()), ee.end());
  for (int d : dd)
    if (d < 1) throw InvalidParameter("dimension must be >= 1");
  for (double e : ee) check_eps(e);

  ComplexityTable t;
  t.criterion = criterion;
  t.setting = setting;
  const std::size_t cells = dd.size() * ee.size();
  t.rows.resize(cells);
  std::vector<std::vector<std::string>> warn(cells);
  std::vector<std::exception_ptr> errors(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      ComplexityQuery q{model, dd[i / ee.size()], ee[i % ee.size()], criterion, setting};
      try {
        t.rows[i] = {q.d, q.eps, n_query(q, &warn[i], opts)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < std::min<std::size_t>(hw, cells); ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < cells; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    if (warnings)
      for (auto& w : warn[i]) warnings->push_back(w);
  }
  return t;
}

}  // namespace tractlab
