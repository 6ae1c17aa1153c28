#include <algorithm>
#include <cmath>
#include <string>

#include "tractlab/spectra.hpp"

namespace tractlab {

bool exceeds(double log_value, double log_threshold) {
  if (std::isnan(log_value) || std::isnan(log_threshold)) throw InvalidParameter("NaN in comparison");
  if (log_value == kNegInf) return false;
  if (log_threshold == kNegInf) return true;
  if (log_value == kInf) return log_threshold != kInf;
  const double scale = std::max({1.0, std::fabs(log_value), std::fabs(log_threshold)});
  return log_value > log_threshold + 1e-12 * scale;
}

std::uint64_t zigzag_rank(std::int64_t h) {
  return h > 0 ? 2 * static_cast<std::uint64_t>(h) : 2 * static_cast<std::uint64_t>(-h) - (h < 0 ? 1 : 0);
}

std::int64_t zigzag_value(std::uint64_t rank) {
  if (rank == 0) return 0;
  return rank % 2 == 1 ? -static_cast<std::int64_t>((rank + 1) / 2) : static_cast<std::int64_t>(rank / 2);
}

double univariate_korobov_eigenvalue(std::int64_t h, double alpha) {
  if (!(alpha > 0.5)) throw InvalidParameter("alpha must exceed 1/2");
  if (h == 0) return 1.0;
  return std::pow(std::fabs(static_cast<double>(h)), -2.0 * alpha);
}

// ---------------------------------------------------------------- univariate

UnivariateSpectrum UnivariateSpectrum::from_values(std::vector<double> prefix, Tail tail, double scale,
                                                   double param) {
  std::vector<double> logs;
  logs.reserve(prefix.size());
  for (double v : prefix) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter("spectrum values must be finite and >= 0");
    logs.push_back(v == 0.0 ? kNegInf : std::log(v));
  }
  if ((tail == Tail::Geometric || tail == Tail::PowerLaw) && !(scale > 0.0 && std::isfinite(scale)))
    throw InvalidParameter("tail scale must be positive");
  return from_logs(std::move(logs), tail, tail == Tail::Geometric || tail == Tail::PowerLaw ? std::log(scale) : 0.0,
                   param);
}

UnivariateSpectrum UnivariateSpectrum::from_logs(std::vector<double> log_prefix, Tail tail, double log_scale,
                                                 double param) {
  UnivariateSpectrum s;
  s.log_prefix_ = std::move(log_prefix);
  s.tail_ = tail;
  s.log_scale_ = log_scale;
  s.param_ = param;
  s.validate();
  return s;
}

void UnivariateSpectrum::validate() const {
  for (std::size_t i = 0; i < log_prefix_.size(); ++i) {
    const double v = log_prefix_[i];
    if (std::isnan(v) || v == kInf) throw InvalidParameter("spectrum prefix entry " + std::to_string(i + 1) + " invalid");
    if (i > 0 && v > log_prefix_[i - 1])
      throw InvalidParameter("spectrum prefix must be non-increasing (entry " + std::to_string(i + 1) + ")");
  }
  if (tail_ == Tail::Geometric && !(param_ > 0.0 && param_ < 1.0))
    throw InvalidParameter("geometric tail ratio must lie in (0,1)");
  if (tail_ == Tail::PowerLaw && !(param_ > 0.0)) throw InvalidParameter("power-law tail exponent must be positive");
  if ((tail_ == Tail::Geometric || tail_ == Tail::PowerLaw) && !std::isfinite(log_scale_))
    throw InvalidParameter("tail scale must be positive and finite");
  if (!log_prefix_.empty() && (tail_ == Tail::Geometric || tail_ == Tail::PowerLaw)) {
    const double first_tail = log_at(log_prefix_.size() + 1);
    if (exceeds(first_tail, log_prefix_.back()))
      throw InvalidParameter("first tail value exceeds the last prefix value");
  }
}

double UnivariateSpectrum::log_at(std::uint64_t n) const {
  if (n == 0) throw InvalidParameter("spectrum index is 1-based");
  if (n <= log_prefix_.size()) return log_prefix_[n - 1];
  switch (tail_) {
    case Tail::Geometric:
      return log_scale_ + static_cast<double>(n) * std::log(param_);
    case Tail::PowerLaw:
      return log_scale_ - param_ * std::log(static_cast<double>(n));
    default:
      return kNegInf;
  }
}

double UnivariateSpectrum::at(std::uint64_t n) const { return std::exp(log_at(n)); }

std::optional<std::uint64_t> UnivariateSpectrum::positive_count() const {
  if (tail_ == Tail::Geometric || tail_ == Tail::PowerLaw) return std::nullopt;
  std::uint64_t c = 0;
  while (c < log_prefix_.size() && log_prefix_[c] != kNegInf) ++c;
  return c;
}

namespace {

// Largest n >= floor_n with pred(n), given a rough estimate; pred is true then false.
template <class Pred>
std::uint64_t refine_last(double estimate, std::uint64_t floor_n, Pred pred) {
  std::uint64_t n = estimate <= static_cast<double>(floor_n) ? floor_n : static_cast<std::uint64_t>(estimate);
  while (n > floor_n && !pred(n)) --n;
  if (n == floor_n && !pred(n)) return floor_n - 1;
  while (pred(n + 1)) ++n;
  return n;
}

constexpr double kHugeCount = 4.0e18;

}  // namespace

CountResult UnivariateSpectrum::count_above(double log_t, std::uint64_t cap) const {
  // prefix: non-increasing, so the predicate flips once
  auto it = std::partition_point(log_prefix_.begin(), log_prefix_.end(),
                                 [&](double v) { return exceeds(v, log_t); });
  std::uint64_t count = static_cast<std::uint64_t>(it - log_prefix_.begin());
  CountResult r;
  if (count < log_prefix_.size() || tail_ == Tail::Finite || tail_ == Tail::Zero) {
    r.value = count;
    if (count > cap) r.status = CountResult::Status::Overflow;
    return r;
  }
  if (log_t == kNegInf) {
    r.status = CountResult::Status::Infinite;
    return r;
  }
  const std::uint64_t P = log_prefix_.size();
  double estimate;
  if (tail_ == Tail::Geometric)
    estimate = (log_t - log_scale_) / std::log(param_);
  else
    estimate = std::exp((log_scale_ - log_t) / param_);
  if (!(estimate < kHugeCount) || estimate > static_cast<double>(cap) + 2.0) {
    r.value = cap + 1;
    r.status = CountResult::Status::Overflow;
    return r;
  }
  const std::uint64_t last = refine_last(estimate, P + 1, [&](std::uint64_t n) { return exceeds(log_at(n), log_t); });
  r.value = last >= P ? last : P;
  if (r.value > cap) r.status = CountResult::Status::Overflow;
  return r;
}

namespace {
double log_add(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::fabs(x - y)));
}
}  // namespace

double UnivariateSpectrum::log_power_sum(double tau, std::uint64_t L) const {
  if (!(tau > 0.0)) throw InvalidParameter("power must be positive");
  if (L == 0) throw InvalidParameter("start index is 1-based");
  const std::uint64_t P = log_prefix_.size();
  double acc = kNegInf;
  // smallest terms first
  for (std::uint64_t n = P; n >= L && n >= 1; --n) acc = log_add(acc, tau * log_prefix_[n - 1]);
  const double start = static_cast<double>(std::max<std::uint64_t>(L, P + 1));
  if (tail_ == Tail::Geometric) {
    const double lq = tau * std::log(param_);
    acc = log_add(acc, tau * log_scale_ + start * lq - std::log(-std::expm1(lq)));
  } else if (tail_ == Tail::PowerLaw) {
    const double s = param_ * tau;
    if (!(s > 1.0)) throw Divergence("power-law tail is not summable for this power", std::exp(acc));
    acc = log_add(acc, tau * log_scale_ + std::log(hurwitz_zeta(s, start)));
  }
  return acc;
}

double UnivariateSpectrum::power_sum_upper(double sigma) const {
  double sum = 0.0;
  for (double v : log_prefix_) sum += std::exp(sigma * v);
  const double n0 = static_cast<double>(log_prefix_.size() + 1);
  if (tail_ == Tail::Geometric) {
    const double lq = sigma * std::log(param_);
    sum += std::exp(sigma * log_scale_ + n0 * lq) / (-std::expm1(lq));
  } else if (tail_ == Tail::PowerLaw) {
    const double s = param_ * sigma;
    if (!(s > 1.0)) return kInf;
    // n0^{-s} + int_{n0}^inf x^{-s} dx
    sum += std::exp(sigma * log_scale_) * (std::pow(n0, -s) + std::pow(n0, 1.0 - s) / (s - 1.0));
  }
  return sum;
}

// ---------------------------------------------------------------- weights

WeightSequence WeightSequence::explicit_list(std::vector<double> values, bool repeat_last) {
  if (values.empty()) throw InvalidParameter("explicit weight list is empty");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParameter("weights must be positive and finite");
  WeightSequence w;
  w.kind_ = Kind::Explicit;
  w.values_ = std::move(values);
  w.repeat_last_ = repeat_last;
  return w;
}

WeightSequence WeightSequence::power(double beta, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(beta))
    throw InvalidParameter("power weights need a positive scale and finite exponent");
  WeightSequence w;
  w.kind_ = Kind::Power;
  w.scale_ = scale;
  w.param_ = beta;
  return w;
}

WeightSequence WeightSequence::geometric(double ratio, double scale) {
  if (!(scale > 0.0) || !(ratio > 0.0) || !std::isfinite(ratio) || !std::isfinite(scale))
    throw InvalidParameter("geometric weights need positive scale and ratio");
  WeightSequence w;
  w.kind_ = Kind::Geometric;
  w.scale_ = scale;
  w.param_ = ratio;
  return w;
}

WeightSequence WeightSequence::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("constant weight must be positive");
  WeightSequence w;
  w.kind_ = Kind::Constant;
  w.scale_ = c;
  return w;
}

double WeightSequence::log_at(std::uint64_t j) const {
  if (j == 0) throw InvalidParameter("weight index is 1-based");
  switch (kind_) {
    case Kind::Explicit:
      if (j <= values_.size()) return std::log(values_[j - 1]);
      return repeat_last_ ? std::log(values_.back()) : kNegInf;
    case Kind::Power:
      return std::log(scale_) - param_ * std::log(static_cast<double>(j));
    case Kind::Geometric:
      return std::log(scale_) + static_cast<double>(j) * std::log(param_);
    case Kind::Constant:
      return std::log(scale_);
  }
  return kNegInf;
}

double WeightSequence::at(std::uint64_t j) const {
  if (kind_ == Kind::Explicit) {
    if (j == 0) throw InvalidParameter("weight index is 1-based");
    if (j <= values_.size()) return values_[j - 1];
    return repeat_last_ ? values_.back() : 0.0;
  }
  if (kind_ == Kind::Constant) return scale_;
  if (kind_ == Kind::Power) return scale_ * std::pow(static_cast<double>(j), -param_);
  return std::exp(log_at(j));
}

bool WeightSequence::non_increasing() const {
  switch (kind_) {
    case Kind::Explicit:
      return std::is_sorted(values_.rbegin(), values_.rend());
    case Kind::Power:
      return param_ >= 0.0;
    case Kind::Geometric:
      return param_ <= 1.0;
    case Kind::Constant:
      return true;
  }
  return false;
}

bool WeightSequence::non_decreasing() const {
  switch (kind_) {
    case Kind::Explicit:
      return repeat_last_ && std::is_sorted(values_.begin(), values_.end());
    case Kind::Power:
      return param_ <= 0.0;
    case Kind::Geometric:
      return param_ >= 1.0;
    case Kind::Constant:
      return true;
  }
  return false;
}

double WeightSequence::infimum() const {
  switch (kind_) {
    case Kind::Explicit: {
      const double m = *std::min_element(values_.begin(), values_.end());
      return repeat_last_ ? m : 0.0;
    }
    case Kind::Power:
      return param_ > 0.0 ? 0.0 : scale_;
    case Kind::Geometric:
      return param_ < 1.0 ? 0.0 : scale_ * param_;
    case Kind::Constant:
      return scale_;
  }
  return 0.0;
}

std::optional<bool> WeightSequence::power_summable(double p) const {
  if (!(p > 0.0)) throw InvalidParameter("summability exponent must be positive");
  switch (kind_) {
    case Kind::Explicit:
      return !repeat_last_ || values_.empty() || values_.back() == 0.0;
    case Kind::Power:
      return param_ * p > 1.0;
    case Kind::Geometric:
      return param_ < 1.0;
    case Kind::Constant:
      return false;
  }
  return std::nullopt;
}

std::optional<bool> WeightSequence::reciprocal_summable() const {
  switch (kind_) {
    case Kind::Explicit:
      return std::nullopt;
    case Kind::Power:
      return param_ < -1.0;
    case Kind::Geometric:
      return param_ > 1.0;
    case Kind::Constant:
      return false;
  }
  return std::nullopt;
}

std::optional<bool> WeightSequence::exp_summable() const {
  switch (kind_) {
    case Kind::Explicit:
      return false;
    case Kind::Power:
      return param_ < 0.0;
    case Kind::Geometric:
      return param_ > 1.0;
    case Kind::Constant:
      return false;
  }
  return std::nullopt;
}

}  // namespace tractlab
