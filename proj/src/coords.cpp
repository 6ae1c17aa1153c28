#include "coords.hpp"

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

namespace tractlab::detail {

namespace {

template <class Pred>
std::uint64_t last_true(double estimate, Pred pred) {
  // largest k >= 1 with pred(k), 0 if none; estimate is close
  std::uint64_t k = estimate < 1.0 ? 1 : static_cast<std::uint64_t>(estimate);
  while (k > 1 && !pred(k)) --k;
  if (k == 1 && !pred(1)) return 0;
  while (pred(k + 1)) ++k;
  return k;
}

constexpr double kHuge = 1.0e18;

CountResult overflow(std::uint64_t cap) { return {cap + 1, CountResult::Status::Overflow}; }

}  // namespace

// ------------------------------------------------------------------ Korobov

KorobovCoord::KorobovCoord(double log_gamma, double alpha) : lg_(log_gamma), alpha_(alpha) {
  if (lg_ > 0.0) {
    // h = 0 sits after every nonzero h with a strictly larger value
    const double est = std::exp(lg_ / (2.0 * alpha_));
    zero_pos_ = 2 * last_true(est, [&](std::uint64_t k) { return exceeds(log_of(static_cast<std::int64_t>(k)), 0.0); });
  }
}

double KorobovCoord::log_of(std::int64_t h) const {
  if (h == 0) return 0.0;
  if (lg_ == kNegInf) return kNegInf;
  return lg_ - 2.0 * alpha_ * std::log(std::fabs(static_cast<double>(h)));
}

std::optional<CoordEntry> KorobovCoord::at(std::uint64_t pos) const {
  if (lg_ == kNegInf) {
    if (pos == 0) return CoordEntry{0.0, 0, 0};
    return std::nullopt;
  }
  if (pos == zero_pos_) return CoordEntry{0.0, 0, 0};
  const std::uint64_t r = pos < zero_pos_ ? pos + 1 : pos;
  const std::int64_t h = zigzag_value(r);
  return CoordEntry{log_of(h), h, r};
}

CountResult KorobovCoord::count_above(double log_t, std::uint64_t cap) const {
  CountResult res;
  const std::uint64_t zero = exceeds(0.0, log_t) ? 1 : 0;
  if (lg_ == kNegInf) {
    res.value = zero;
    return res;
  }
  if (log_t == kNegInf) return {0, CountResult::Status::Infinite};
  const double est = std::exp((lg_ - log_t) / (2.0 * alpha_));
  if (!(est < kHuge) || 2.0 * est > static_cast<double>(cap) + 4.0) return overflow(cap);
  const std::uint64_t K = last_true(est, [&](std::uint64_t k) { return exceeds(log_of(static_cast<std::int64_t>(k)), log_t); });
  res.value = 2 * K + zero;
  if (res.value > cap) res.status = CountResult::Status::Overflow;
  return res;
}

double KorobovCoord::power_sum_upper(double sigma) const {
  if (lg_ == kNegInf) return 1.0;
  const double s = 2.0 * alpha_ * sigma;
  if (!(s > 1.0)) return kInf;
  // zeta(s) <= 1 + 1/(s-1)
  return 1.0 + 2.0 * std::exp(sigma * lg_) * (1.0 + 1.0 / (s - 1.0));
}

// ------------------------------------------------------------------ analytic

AnalyticCoord::AnalyticCoord(double log_omega, double a, double b) : lw_(log_omega), a_(a), b_(b) {}

double AnalyticCoord::log_of(std::int64_t h) const {
  if (h == 0) return 0.0;
  return lw_ * a_ * std::pow(std::fabs(static_cast<double>(h)), b_);
}

std::optional<CoordEntry> AnalyticCoord::at(std::uint64_t pos) const {
  const std::int64_t h = zigzag_value(pos);
  const double l = log_of(h);
  if (l == kNegInf) return std::nullopt;
  return CoordEntry{l, h, pos};
}

CountResult AnalyticCoord::count_above(double log_t, std::uint64_t cap) const {
  CountResult res;
  const std::uint64_t zero = exceeds(0.0, log_t) ? 1 : 0;
  if (log_t == kNegInf) return {0, CountResult::Status::Infinite};
  if (log_t >= 0.0) {
    res.value = zero;
    return res;
  }
  const double est = std::pow(log_t / (lw_ * a_), 1.0 / b_);
  if (!(est < kHuge) || 2.0 * est > static_cast<double>(cap) + 4.0) return overflow(cap);
  const std::uint64_t K = last_true(est, [&](std::uint64_t k) { return exceeds(log_of(static_cast<std::int64_t>(k)), log_t); });
  res.value = 2 * K + zero;
  if (res.value > cap) res.status = CountResult::Status::Overflow;
  return res;
}

namespace {
// sum_{h>H} exp(-c h^b)
double analytic_remainder(double c, double b, double H) {
  if (b >= 1.0) {
    // consecutive ratios are at most e^{-c}
    return std::exp(-c * std::pow(H + 1.0, b)) / (-std::expm1(-c));
  }
  // integral bound, the summand is decreasing
  const double s = 1.0 / b;
  return s * std::pow(c, -s) * boost::math::tgamma(s, c * std::pow(H, b));
}
}  // namespace

TailSumResult AnalyticCoord::inner_sum(double tau, double rel_tol) const {
  const double c = -tau * a_ * lw_;
  double sum = 0.0;
  double H = 0.0;
  double bound = kInf;
  while (H < 1e8) {
    H += 1.0;
    sum += std::exp(-c * std::pow(H, b_));
    bound = analytic_remainder(c, b_, H);
    if (bound <= rel_tol * sum || bound < 1e-300) break;
  }
  return {sum, bound, false};
}

double AnalyticCoord::power_sum_upper(double sigma) const {
  const TailSumResult r = inner_sum(sigma, 1e-6);
  return 1.0 + 2.0 * (r.value + r.tail_bound);
}

// ------------------------------------------------------------------ explicit

double UnivCoord::log_of(std::int64_t n) const {
  if (n < 1) throw InvalidParameter("tensor witness indices are 1-based");
  return s_.log_at(static_cast<std::uint64_t>(n));
}

std::optional<CoordEntry> UnivCoord::at(std::uint64_t pos) const {
  const double l = s_.log_at(pos + 1);
  if (l == kNegInf) return std::nullopt;
  return CoordEntry{l, static_cast<std::int64_t>(pos + 1), pos + 1};
}

std::vector<std::unique_ptr<Coord>> make_coords(const SpectrumModel& model, int d) {
  if (d < 1) throw InvalidParameter("dimension must be >= 1");
  std::vector<std::unique_ptr<Coord>> out;
  switch (model.kind) {
    case SpectrumModel::Kind::Explicit:
      out.push_back(std::make_unique<UnivCoord>(model.spectrum_for(d)));
      break;
    case SpectrumModel::Kind::TensorProduct:
      for (int j = 0; j < d; ++j) out.push_back(std::make_unique<UnivCoord>(model.univariate));
      break;
    case SpectrumModel::Kind::Korobov:
      for (int j = 0; j < d; ++j) out.push_back(std::make_unique<KorobovCoord>(0.0, model.alpha));
      break;
    case SpectrumModel::Kind::WeightedKorobovProduct:
      for (int j = 1; j <= d; ++j) out.push_back(std::make_unique<KorobovCoord>(model.gamma.log_at(j), model.alpha));
      break;
    case SpectrumModel::Kind::AnalyticKorobov: {
      const double lw = std::log(model.omega);
      for (int j = 1; j <= d; ++j) out.push_back(std::make_unique<AnalyticCoord>(lw, model.a.at(j), model.b.at(j)));
      break;
    }
  }
  return out;
}

std::optional<CoordEntry> CachedCoord::at(std::uint64_t pos) {
  while (!ended_ && cache_.size() <= pos) {
    auto e = c_->at(cache_.size());
    if (!e) {
      ended_ = true;
      break;
    }
    cache_.push_back(*e);
  }
  if (pos < cache_.size()) return cache_[pos];
  return std::nullopt;
}

}  // namespace tractlab::detail
