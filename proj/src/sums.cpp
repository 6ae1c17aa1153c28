#include <algorithm>
#include <cmath>

#include "coords.hpp"
#include "tractlab/spectra.hpp"

namespace tractlab {

namespace {

using detail::CachedCoord;

struct Counter {
  std::vector<CachedCoord>& coords;
  std::vector<double> max_before;  // sum of max logs of coordinates 0..j-1
  std::uint64_t cap;
  bool overflow = false;

  std::uint64_t run(std::size_t j, double r) {
    if (overflow) return 0;
    if (j == 0) {
      CountResult c = coords[0].coord().count_above(r, cap);
      if (!c.exact()) overflow = true;
      return c.value;
    }
    std::uint64_t total = 0;
    for (std::uint64_t p = 0;; ++p) {
      auto e = coords[j].at(p);
      if (!e || !exceeds(e->log + max_before[j], r)) break;
      total += run(j - 1, r - e->log);
      if (overflow || total > cap) {
        overflow = true;
        return total;
      }
    }
    return total;
  }
};

}  // namespace

CountResult count_above_log(const SpectrumModel& model, int d, double log_t, std::uint64_t cap) {
  model.validate();
  auto coords = detail::make_coords(model, d);
  std::vector<CachedCoord> cached;
  for (auto& c : coords) cached.emplace_back(*c);
  for (auto& c : coords)
    if (c->max_log() == kNegInf) return {};
  if (log_t == kNegInf) {
    // every positive eigenvalue counts
    double prod = 1.0;
    for (auto& c : coords) {
      if (c->infinite()) return {0, CountResult::Status::Infinite};
      prod *= static_cast<double>(c->count_above(kNegInf, cap).value);
    }
    if (prod > static_cast<double>(cap)) return {cap + 1, CountResult::Status::Overflow};
    return {static_cast<std::uint64_t>(prod), CountResult::Status::Exact};
  }
  Counter counter{cached, std::vector<double>(coords.size(), 0.0), cap};
  for (std::size_t j = 1; j < coords.size(); ++j) counter.max_before[j] = counter.max_before[j - 1] + coords[j - 1]->max_log();
  const std::uint64_t v = counter.run(coords.size() - 1, log_t);
  if (counter.overflow) return {cap + 1, CountResult::Status::Overflow};
  return {v, CountResult::Status::Exact};
}

CountResult count_above(const SpectrumModel& model, int d, double t, std::uint64_t cap) {
  if (!(t >= 0.0)) throw InvalidParameter("threshold must be >= 0");
  return count_above_log(model, d, t == 0.0 ? kNegInf : std::log(t), cap);
}

double power_sum_upper(const SpectrumModel& model, int d, double sigma) {
  auto coords = detail::make_coords(model, d);
  double prod = 1.0;
  for (auto& c : coords) prod *= c->power_sum_upper(sigma);
  return prod;
}

namespace {

// sum of lambda^tau over the first count stream terms
double head_sum(const SpectrumModel& model, int d, double tau, std::uint64_t count, const SumOptions& opts) {
  if (count == 0) return 0.0;
  EigenStream st(model, d, {opts.node_budget});
  std::vector<double> terms;
  while (terms.size() < count) {
    auto v = st.next();
    if (!v) break;
    terms.push_back(std::exp(tau * v->log_value));
  }
  double s = 0.0;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) s += *it;
  return s;
}

// partial sum for a divergent series, stopped at a modest cap
double divergent_partial(const SpectrumModel& model, int d, double tau, const SumOptions& opts) {
  try {
    return head_sum(model, d, tau, std::min<std::uint64_t>(opts.term_cap, 100000), opts);
  } catch (const ResourceLimit&) {
    return kInf;
  }
}

}  // namespace

TailSumResult tail_power_sum(const SpectrumModel& model, int d, double tau, std::uint64_t L, SumOptions opts) {
  if (!(tau > 0.0)) throw InvalidParameter("tau must be positive");
  if (L < 1) throw InvalidParameter("L must be >= 1");
  if (d < 1) throw InvalidParameter("dimension must be >= 1");
  model.validate();
  TailSumResult r;
  switch (model.kind) {
    case SpectrumModel::Kind::Explicit:
      r.value = std::exp(model.spectrum_for(d).log_power_sum(tau, L));
      r.exact = true;
      return r;
    case SpectrumModel::Kind::TensorProduct: {
      double ls;
      try {
        ls = model.univariate.log_power_sum(tau, 1);
      } catch (const Divergence&) {
        throw Divergence("tensor power sum diverges", divergent_partial(model, d, tau, opts));
      }
      r.value = std::exp(d * ls);
      r.exact = true;
      break;
    }
    case SpectrumModel::Kind::Korobov:
    case SpectrumModel::Kind::WeightedKorobovProduct: {
      const double s = 2.0 * model.alpha * tau;
      if (!(s > 1.0)) throw Divergence("Korobov power sum diverges for 2*alpha*tau <= 1", divergent_partial(model, d, tau, opts));
      const double z = zeta(s);
      const WeightSequence w = model.weights();
      double prod = 1.0;
      for (int j = 1; j <= d; ++j) {
        const double lg = w.log_at(j);
        if (lg != kNegInf) prod *= 1.0 + 2.0 * std::exp(tau * lg) * z;
      }
      r.value = prod;
      r.exact = true;
      break;
    }
    case SpectrumModel::Kind::AnalyticKorobov: {
      const double lw = std::log(model.omega);
      double lo = 1.0, hi = 1.0;
      for (int j = 1; j <= d; ++j) {
        detail::AnalyticCoord c(lw, model.a.at(j), model.b.at(j));
        const TailSumResult in = c.inner_sum(tau, opts.tolerance / (4.0 * d));
        lo *= 1.0 + 2.0 * in.value;
        hi *= 1.0 + 2.0 * (in.value + in.tail_bound);
      }
      r.value = lo;
      r.tail_bound = hi - lo;
      r.exact = false;
      break;
    }
  }
  if (L > 1) r.value = std::max(0.0, r.value - head_sum(model, d, tau, L - 1, opts));
  return r;
}

TailSumResult stream_power_sum(const SpectrumModel& model, int d, double tau, std::uint64_t L,
                               std::uint64_t max_terms, SumOptions opts) {
  if (!(tau > 0.0)) throw InvalidParameter("tau must be positive");
  EigenStream st(model, d, {opts.node_budget});
  std::vector<double> terms;
  double last = 0.0;
  std::uint64_t n = 0;
  while (n < max_terms) {
    auto v = st.next();
    if (!v) break;
    ++n;
    last = v->log_value;
    if (n >= L) terms.push_back(std::exp(tau * v->log_value));
  }
  TailSumResult r;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) r.value += *it;
  if (st.exhausted()) return r;
  // Remaining terms are all <= e^last: sum lambda^tau <= e^{(tau-sigma) last} * sum lambda^sigma.
  double best = kInf;
  for (int k = 1; k <= 64; ++k) {
    const double sigma = tau * k / 64.0;
    const double u = power_sum_upper(model, d, sigma);
    if (std::isfinite(u)) best = std::min(best, std::exp((tau - sigma) * last) * u);
  }
  r.tail_bound = best;
  return r;
}

std::optional<CountEnvelope> log_count_envelope(const SpectrumModel& model, int d) {
  auto univ_env = [](const UnivariateSpectrum& s) -> std::optional<CountEnvelope> {
    const double P = static_cast<double>(s.prefix_size());
    switch (s.tail()) {
      case UnivariateSpectrum::Tail::Finite:
      case UnivariateSpectrum::Tail::Zero:
        return CountEnvelope{P, 0.0, 0.0};
      case UnivariateSpectrum::Tail::Geometric:
        return CountEnvelope{P + (1.0 + std::fabs(s.log_scale())) / -std::log(s.param()), 1.0, 1.0};
      case UnivariateSpectrum::Tail::PowerLaw:
        return std::nullopt;
    }
    return std::nullopt;
  };
  switch (model.kind) {
    case SpectrumModel::Kind::Explicit:
      return univ_env(model.spectrum_for(d));
    case SpectrumModel::Kind::TensorProduct: {
      if (model.univariate.log_at(1) > 0.0) return std::nullopt;
      auto e = univ_env(model.univariate);
      if (!e) return std::nullopt;
      return CountEnvelope{std::pow(e->A, d), e->B * d, e->y1};
    }
    case SpectrumModel::Kind::AnalyticKorobov: {
      const double lw = -std::log(model.omega);
      CountEnvelope env{1.0, 0.0, 0.0};
      for (int j = 1; j <= d; ++j) {
        const double aj = model.a.at(j), bj = model.b.at(j);
        env.A *= 3.0 * std::pow(aj * lw, -1.0 / bj);
        env.B += 1.0 / bj;
        env.y1 = std::max(env.y1, aj * lw);
      }
      return env;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace tractlab
