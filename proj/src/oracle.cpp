#include "tractlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace tractlab::oracle {

namespace {

double univariate_value(const UnivariateSpectrum& s, std::int64_t n) {
  const auto& pre = s.log_prefix();
  if (n <= static_cast<std::int64_t>(pre.size())) return std::exp(pre[n - 1]);
  const double scale = std::exp(s.log_scale());
  switch (s.tail()) {
    case UnivariateSpectrum::Tail::Geometric:
      return scale * std::pow(s.param(), static_cast<double>(n));
    case UnivariateSpectrum::Tail::PowerLaw:
      return scale * std::pow(static_cast<double>(n), -s.param());
    default:
      return 0.0;
  }
}

double korobov_gamma(const SpectrumModel& m, int j) {
  return m.kind == SpectrumModel::Kind::Korobov ? 1.0 : m.gamma.at(j);
}

double brute_value(const SpectrumModel& m, int d, const std::vector<std::int64_t>& w) {
  switch (m.kind) {
    case SpectrumModel::Kind::Explicit:
      return univariate_value(m.per_d[std::min<std::size_t>(d, m.per_d.size()) - 1], w[0]);
    case SpectrumModel::Kind::TensorProduct: {
      double p = 1.0;
      for (auto n : w) p *= univariate_value(m.univariate, n);
      return p;
    }
    case SpectrumModel::Kind::Korobov:
    case SpectrumModel::Kind::WeightedKorobovProduct: {
      double p = 1.0;
      for (int j = 0; j < d; ++j)
        if (w[j] != 0) p *= korobov_gamma(m, j + 1) * std::pow(std::abs(static_cast<double>(w[j])), -2.0 * m.alpha);
      return p;
    }
    case SpectrumModel::Kind::AnalyticKorobov: {
      double s = 0.0;
      for (int j = 0; j < d; ++j)
        s += m.a.at(j + 1) * std::pow(std::abs(static_cast<double>(w[j])), m.b.at(j + 1));
      return std::pow(m.omega, s);
    }
  }
  return 0.0;
}

std::uint64_t zz(std::int64_t h) { return h > 0 ? 2 * h : (h < 0 ? -2 * h - 1 : 0); }

}  // namespace

BruteResult brute_eigenvalues(const SpectrumModel& model, int d, int radius, std::uint64_t budget) {
  if (radius < 1 || d < 1) throw InvalidParameter("brute box needs radius >= 1 and d >= 1");
  const bool lattice = model.is_korobov() || model.kind == SpectrumModel::Kind::AnalyticKorobov;
  const int dims = model.kind == SpectrumModel::Kind::Explicit ? 1 : d;
  const std::int64_t lo = lattice ? -radius : 1;
  const std::int64_t hi = radius;
  const double side = static_cast<double>(hi - lo + 1);
  if (std::pow(side, dims) > static_cast<double>(budget))
    throw ResourceLimit("brute box exceeds the enumeration budget", 0);

  BruteResult res;
  res.box.radius = radius;
  res.box.d = d;
  std::vector<std::int64_t> w(dims, lo);
  while (true) {
    const double v = brute_value(model, d, w);
    if (v > 0.0) res.values.push_back({v, w});
    int j = dims - 1;
    while (j >= 0 && w[j] == hi) w[j--] = lo;
    if (j < 0) break;
    ++w[j];
  }
  std::sort(res.values.begin(), res.values.end(), [](const BruteEigen& x, const BruteEigen& y) {
    if (x.lambda != y.lambda) return x.lambda > y.lambda;
    for (std::size_t j = 0; j < x.witness.size(); ++j) {
      const auto rx = zz(x.witness[j]), ry = zz(y.witness[j]);
      if (rx != ry) return rx < ry;
    }
    return false;
  });

  // largest eigenvalue a point outside the box can have
  double out = 0.0;
  const double R1 = radius + 1.0;
  switch (model.kind) {
    case SpectrumModel::Kind::Explicit:
      out = univariate_value(model.per_d[std::min<std::size_t>(d, model.per_d.size()) - 1], radius + 1);
      break;
    case SpectrumModel::Kind::TensorProduct:
      out = univariate_value(model.univariate, radius + 1) *
            std::pow(std::max(1.0, univariate_value(model.univariate, 1)), d - 1);
      break;
    case SpectrumModel::Kind::Korobov:
    case SpectrumModel::Kind::WeightedKorobovProduct:
      for (int j = 1; j <= d; ++j) {
        double v = korobov_gamma(model, j) * std::pow(R1, -2.0 * model.alpha);
        for (int i = 1; i <= d; ++i)
          if (i != j) v *= std::max(1.0, korobov_gamma(model, i));
        out = std::max(out, v);
      }
      break;
    case SpectrumModel::Kind::AnalyticKorobov:
      for (int j = 1; j <= d; ++j) out = std::max(out, std::pow(model.omega, model.a.at(j) * std::pow(R1, model.b.at(j))));
      break;
  }
  res.box.outside_bound = out;
  res.box.completeness_certificate = !res.values.empty() && out <= res.values.back().lambda;
  return res;
}

std::uint64_t brute_n(const SpectrumModel& model, int d, double eps, ErrorCriterion criterion, int radius,
                      std::uint64_t budget) {
  if (!(eps > 0.0)) throw InvalidParameter("epsilon must be positive");
  const BruteResult r = brute_eigenvalues(model, d, radius, budget);
  const double top = r.values.empty() ? 0.0 : r.values.front().lambda;
  if (r.box.outside_bound > top) throw CertificateUnavailable("box does not certify the largest eigenvalue");
  double t = eps * eps;
  if (criterion == ErrorCriterion::NOR) {
    if (top == 0.0) return 0;
    t *= top;
  }
  if (r.box.outside_bound > t * (1.0 + 1e-12))
    throw CertificateUnavailable("box does not certify the threshold; enlarge the radius");
  std::uint64_t n = 0;
  for (const auto& e : r.values)
    if (e.lambda > t * (1.0 + 1e-12)) ++n;
  return n;
}

std::uint64_t brute_count_lattice(const std::vector<double>& a, const std::vector<double>& b, double ell, int d,
                                  std::uint64_t budget) {
  if (d < 1 || static_cast<int>(a.size()) < d || static_cast<int>(b.size()) < d)
    throw InvalidParameter("a and b need at least d entries");
  const double limit = ell + 1.0;
  std::uint64_t visited = 0;
  std::function<std::uint64_t(int, double)> rec = [&](int j, double used) -> std::uint64_t {
    if (j == d) return 1;
    std::uint64_t c = 0;
    for (std::int64_t h = 0;; ++h) {
      const double s = used + a[j] * std::pow(static_cast<double>(h), b[j]);
      if (!(s < limit)) break;
      if (++visited > budget) throw ResourceLimit("lattice count exceeds budget", 0);
      const std::uint64_t sub = rec(j + 1, s);
      c += h == 0 ? sub : 2 * sub;
    }
    return c;
  };
  return rec(0, 0.0);
}

}  // namespace tractlab::oracle
