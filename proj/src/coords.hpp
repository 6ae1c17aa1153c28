#pragma once
// Per-coordinate sorted eigenvalue sequences. Every product model is a sum of
// coordinate logs; explicit models are a single coordinate.

#include <memory>
#include <optional>
#include <vector>

#include "tractlab/spectra.hpp"

namespace tractlab::detail {

struct CoordEntry {
  double log = kNegInf;
  std::int64_t witness = 0;
  std::uint64_t rank = 0;  // tie-break key
};

class Coord {
 public:
  virtual ~Coord() = default;
  // pos-th entry in non-increasing order; nullopt past the last positive value
  virtual std::optional<CoordEntry> at(std::uint64_t pos) const = 0;
  virtual CountResult count_above(double log_t, std::uint64_t cap) const = 0;
  virtual double log_of(std::int64_t witness) const = 0;
  virtual double power_sum_upper(double sigma) const = 0;
  virtual bool infinite() const = 0;
  double max_log() const {
    auto e = at(0);
    return e ? e->log : kNegInf;
  }
};

class KorobovCoord final : public Coord {
 public:
  KorobovCoord(double log_gamma, double alpha);
  std::optional<CoordEntry> at(std::uint64_t pos) const override;
  CountResult count_above(double log_t, std::uint64_t cap) const override;
  double log_of(std::int64_t h) const override;
  double power_sum_upper(double sigma) const override;
  bool infinite() const override { return lg_ != kNegInf; }

 private:
  double lg_;
  double alpha_;
  std::uint64_t zero_pos_ = 0;
};

class AnalyticCoord final : public Coord {
 public:
  AnalyticCoord(double log_omega, double a, double b);
  std::optional<CoordEntry> at(std::uint64_t pos) const override;
  CountResult count_above(double log_t, std::uint64_t cap) const override;
  double log_of(std::int64_t h) const override;
  double power_sum_upper(double sigma) const override;
  bool infinite() const override { return true; }
  // sum_{h>=1} omega^{tau a h^b} with a certified remainder bound
  TailSumResult inner_sum(double tau, double rel_tol) const;

 private:
  double lw_;
  double a_;
  double b_;
};

class UnivCoord final : public Coord {
 public:
  explicit UnivCoord(const UnivariateSpectrum& s) : s_(s) {}
  std::optional<CoordEntry> at(std::uint64_t pos) const override;
  CountResult count_above(double log_t, std::uint64_t cap) const override { return s_.count_above(log_t, cap); }
  double log_of(std::int64_t n) const override;
  double power_sum_upper(double sigma) const override { return s_.power_sum_upper(sigma); }
  bool infinite() const override { return !s_.positive_count().has_value(); }

 private:
  const UnivariateSpectrum& s_;
};

// Coordinates for dimension d; references into model must outlive the result.
std::vector<std::unique_ptr<Coord>> make_coords(const SpectrumModel& model, int d);

// Entry cache in front of a coordinate, used by the hot loops.
class CachedCoord {
 public:
  explicit CachedCoord(const Coord& c) : c_(&c) {}
  std::optional<CoordEntry> at(std::uint64_t pos);
  const Coord& coord() const { return *c_; }

 private:
  const Coord* c_;
  std::vector<CoordEntry> cache_;
  bool ended_ = false;
};

}  // namespace tractlab::detail
