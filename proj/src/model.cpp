#include <algorithm>
#include <cmath>
#include <string>

#include "tractlab/spectra.hpp"

namespace tractlab {

SpectrumModel SpectrumModel::explicit_model(std::vector<UnivariateSpectrum> per_d) {
  SpectrumModel m;
  m.kind = Kind::Explicit;
  m.per_d = std::move(per_d);
  m.validate();
  return m;
}

SpectrumModel SpectrumModel::tensor(UnivariateSpectrum univariate) {
  SpectrumModel m;
  m.kind = Kind::TensorProduct;
  m.univariate = std::move(univariate);
  m.validate();
  return m;
}

SpectrumModel SpectrumModel::korobov(double alpha) {
  SpectrumModel m;
  m.kind = Kind::Korobov;
  m.alpha = alpha;
  m.validate();
  return m;
}

SpectrumModel SpectrumModel::weighted_korobov(double alpha, WeightSequence gamma) {
  SpectrumModel m;
  m.kind = Kind::WeightedKorobovProduct;
  m.alpha = alpha;
  m.gamma = std::move(gamma);
  m.validate();
  return m;
}

SpectrumModel SpectrumModel::analytic_korobov(double omega, WeightSequence a, WeightSequence b) {
  SpectrumModel m;
  m.kind = Kind::AnalyticKorobov;
  m.omega = omega;
  m.a = std::move(a);
  m.b = std::move(b);
  m.validate();
  return m;
}

void SpectrumModel::validate() const {
  switch (kind) {
    case Kind::Explicit:
      if (per_d.empty()) throw InvalidParameter("explicit model needs at least one spectrum");
      break;
    case Kind::TensorProduct:
      if (univariate.prefix_size() == 0 && univariate.tail() != UnivariateSpectrum::Tail::Geometric &&
          univariate.tail() != UnivariateSpectrum::Tail::PowerLaw)
        throw InvalidParameter("tensor model needs a non-empty univariate spectrum");
      break;
    case Kind::Korobov:
    case Kind::WeightedKorobovProduct:
      if (!(alpha > 0.5) || !std::isfinite(alpha)) throw InvalidParameter("alpha must exceed 1/2");
      if (kind == Kind::WeightedKorobovProduct && !gamma.non_increasing())
        throw InvalidParameter("product weights must be non-increasing");
      break;
    case Kind::AnalyticKorobov:
      if (!(omega > 0.0 && omega < 1.0)) throw InvalidParameter("omega must lie in (0,1)");
      if (!a.non_decreasing()) throw InvalidParameter("sequence a must be non-decreasing and positive");
      if (!(a.infimum() > 0.0)) throw InvalidParameter("inf a_j must be positive");
      if (!(b.infimum() > 0.0)) throw InvalidParameter("inf b_j must be positive");
      break;
  }
}

const UnivariateSpectrum& SpectrumModel::spectrum_for(int d) const {
  if (kind == Kind::TensorProduct) return univariate;
  if (kind != Kind::Explicit) throw InvalidParameter("spectrum_for applies to explicit models");
  if (d < 1) throw InvalidParameter("dimension must be >= 1");
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(d), per_d.size());
  return per_d[i - 1];
}

WeightSequence SpectrumModel::weights() const {
  if (kind == Kind::WeightedKorobovProduct) return gamma;
  return WeightSequence::constant(1.0);
}

const char* SpectrumModel::kind_name() const {
  switch (kind) {
    case Kind::Explicit:
      return "explicit";
    case Kind::TensorProduct:
      return "tensor";
    case Kind::Korobov:
      return "korobov";
    case Kind::WeightedKorobovProduct:
      return "weighted_korobov";
    case Kind::AnalyticKorobov:
      return "analytic_korobov";
  }
  return "?";
}

double LogEigenvalue::value() const { return std::exp(log_value); }

}  // namespace tractlab
