#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "tractlab/errors.hpp"

namespace tractlab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Log-domain "strictly greater" with a few-ulp allowance: values equal up to
// accumulated rounding count as equal, hence not above.
bool exceeds(double log_value, double log_threshold);

double zeta(double s);
// sum_{k>=0} (q+k)^{-s}
double hurwitz_zeta(double s, double q);

// 1 for h = 0, |h|^{-2 alpha} otherwise.
double univariate_korobov_eigenvalue(std::int64_t h, double alpha);

// Rank of an integer in the order 0, -1, 1, -2, 2, ...
std::uint64_t zigzag_rank(std::int64_t h);
std::int64_t zigzag_value(std::uint64_t rank);

struct CountResult {
  enum class Status { Exact, Overflow, Infinite };
  std::uint64_t value = 0;
  Status status = Status::Exact;
  bool exact() const { return status == Status::Exact; }
};

class UnivariateSpectrum {
 public:
  enum class Tail { Finite, Zero, Geometric, PowerLaw };

  UnivariateSpectrum() = default;
  // Geometric tail: lambda_n = scale * param^n. PowerLaw: lambda_n = scale * n^{-param}.
  // n is the absolute 1-based index; the tail starts after the prefix.
  static UnivariateSpectrum from_values(std::vector<double> prefix, Tail tail = Tail::Finite,
                                        double scale = 1.0, double param = 0.0);
  static UnivariateSpectrum from_logs(std::vector<double> log_prefix, Tail tail = Tail::Finite,
                                      double log_scale = 0.0, double param = 0.0);
  static UnivariateSpectrum geometric(double scale, double ratio) {
    return from_values({}, Tail::Geometric, scale, ratio);
  }
  static UnivariateSpectrum power_law(double scale, double beta) {
    return from_values({}, Tail::PowerLaw, scale, beta);
  }

  double log_at(std::uint64_t n) const;  // 1-based, -inf past a finite end
  double at(std::uint64_t n) const;
  std::uint64_t prefix_size() const { return log_prefix_.size(); }
  const std::vector<double>& log_prefix() const { return log_prefix_; }
  Tail tail() const { return tail_; }
  double log_scale() const { return log_scale_; }
  double param() const { return param_; }

  // Number of strictly positive values, nullopt when infinite.
  std::optional<std::uint64_t> positive_count() const;
  CountResult count_above(double log_t, std::uint64_t cap) const;
  // log of sum_{n>=L} lambda_n^tau. Throws Divergence for a non-summable tail.
  double log_power_sum(double tau, std::uint64_t L) const;
  // Upper bound on sum_{n>=1} lambda_n^sigma using integral bounds only.
  double power_sum_upper(double sigma) const;

 private:
  void validate() const;
  std::vector<double> log_prefix_;
  Tail tail_ = Tail::Finite;
  double log_scale_ = 0.0;
  double param_ = 0.0;
};

class WeightSequence {
 public:
  enum class Kind { Explicit, Power, Geometric, Constant };

  WeightSequence() = default;  // constant 1
  // Beyond the list: zero when repeat_last is false, else the last entry.
  static WeightSequence explicit_list(std::vector<double> values, bool repeat_last = false);
  static WeightSequence power(double beta, double scale = 1.0);        // scale * j^{-beta}
  static WeightSequence geometric(double ratio, double scale = 1.0);   // scale * ratio^j
  static WeightSequence constant(double c);

  Kind kind() const { return kind_; }
  const std::vector<double>& values() const { return values_; }
  bool repeat_last() const { return repeat_last_; }
  double scale() const { return scale_; }
  double param() const { return param_; }

  double at(std::uint64_t j) const;      // 1-based
  double log_at(std::uint64_t j) const;  // -inf for zero
  bool non_increasing() const;
  bool non_decreasing() const;
  double infimum() const;
  // Whether sum_j w_j^p is finite; nullopt if undecidable from the descriptor.
  std::optional<bool> power_summable(double p) const;
  // Whether sum_j 1/w_j is finite.
  std::optional<bool> reciprocal_summable() const;
  // Whether sum_j exp(-c w_j) is finite for c > 0.
  std::optional<bool> exp_summable() const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> values_;
  bool repeat_last_ = false;
  double scale_ = 1.0;
  double param_ = 0.0;
};

struct SpectrumModel {
  enum class Kind { Explicit, TensorProduct, Korobov, WeightedKorobovProduct, AnalyticKorobov };

  Kind kind = Kind::Korobov;
  std::vector<UnivariateSpectrum> per_d;  // Explicit; the last entry serves all larger d
  UnivariateSpectrum univariate;          // TensorProduct
  double alpha = 1.0;                     // Korobov families
  WeightSequence gamma;                   // WeightedKorobovProduct
  double omega = 0.5;                     // AnalyticKorobov
  WeightSequence a;
  WeightSequence b;

  static SpectrumModel explicit_model(std::vector<UnivariateSpectrum> per_d);
  static SpectrumModel tensor(UnivariateSpectrum univariate);
  static SpectrumModel korobov(double alpha);
  static SpectrumModel weighted_korobov(double alpha, WeightSequence gamma);
  static SpectrumModel analytic_korobov(double omega, WeightSequence a, WeightSequence b);

  void validate() const;
  bool is_product() const { return kind != Kind::Explicit; }
  bool is_korobov() const { return kind == Kind::Korobov || kind == Kind::WeightedKorobovProduct; }
  const UnivariateSpectrum& spectrum_for(int d) const;
  WeightSequence weights() const;  // gamma, constant 1 for unweighted
  const char* kind_name() const;
};

struct LogEigenvalue {
  double log_value = kNegInf;
  std::vector<std::int64_t> witness;
  std::uint64_t rank = 0;
  double value() const;
};

struct StreamOptions {
  std::uint64_t node_budget = 10'000'000;
};

struct StreamResult {
  std::vector<LogEigenvalue> values;
  bool truncated = false;  // fewer positive eigenvalues than requested
};

// Best-first enumeration of eigenvalues in non-increasing order.
class EigenStream {
 public:
  EigenStream(const SpectrumModel& model, int d, StreamOptions opts = {});
  ~EigenStream();
  EigenStream(EigenStream&&) noexcept;
  EigenStream& operator=(EigenStream&&) noexcept;

  std::optional<LogEigenvalue> next();
  std::uint64_t rank() const;
  bool exhausted() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

StreamResult eigenvalue_stream(const SpectrumModel& model, int d, std::uint64_t k,
                               StreamOptions opts = {});

// log lambda for a witness; Korobov families take h, tensor/explicit take 1-based indices.
double witness_log_value(const SpectrumModel& model, int d, const std::vector<std::int64_t>& witness);

// Largest eigenvalue in log form (-inf for the zero operator).
double log_lambda_max(const SpectrumModel& model, int d);

CountResult count_above(const SpectrumModel& model, int d, double t,
                        std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() / 4);
CountResult count_above_log(const SpectrumModel& model, int d, double log_t, std::uint64_t cap);

struct TailSumResult {
  double value = 0.0;
  double tail_bound = 0.0;
  bool exact = false;
};

struct SumOptions {
  double tolerance = 1e-10;
  std::uint64_t term_cap = 2'000'000;
  std::uint64_t node_budget = 10'000'000;
};

// sum_{n>=L} lambda_{n,d}^tau
TailSumResult tail_power_sum(const SpectrumModel& model, int d, double tau, std::uint64_t L,
                             SumOptions opts = {});

// Same sum by stream enumeration of max_terms eigenvalues with a certified remainder.
TailSumResult stream_power_sum(const SpectrumModel& model, int d, double tau, std::uint64_t L,
                               std::uint64_t max_terms, SumOptions opts = {});

// Upper bound on sum_n lambda_{n,d}^sigma from integral estimates (no zeta calls).
double power_sum_upper(const SpectrumModel& model, int d, double sigma);

// Count envelope #{n : ln(1/lambda_n) < y} <= A y^B for y >= y1.
struct CountEnvelope {
  double A = 0.0;
  double B = 0.0;
  double y1 = 0.0;
};
std::optional<CountEnvelope> log_count_envelope(const SpectrumModel& model, int d);

}  // namespace tractlab
