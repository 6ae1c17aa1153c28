#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tractlab/complexity.hpp"
#include "tractlab/criteria.hpp"

using namespace tractlab;

namespace {

constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;
const double kLn3 = std::log(3.0);

SpectrumModel geo_half() { return SpectrumModel::explicit_model({UnivariateSpectrum::geometric(1.0, 0.5)}); }
SpectrumModel inv_power(double beta) { return SpectrumModel::explicit_model({UnivariateSpectrum::power_law(1.0, beta)}); }
SpectrumModel wk(double alpha, WeightSequence g) { return SpectrumModel::weighted_korobov(alpha, std::move(g)); }
SpectrumModel analytic_ej() {
  return SpectrumModel::analytic_korobov(0.5, WeightSequence::geometric(std::exp(1.0)), WeightSequence::power(-2.0));
}

// lambda_{n,d} = 1 for n <= 3^d, zero after
SpectrumModel three_pow_indicator(int d_max) {
  std::vector<UnivariateSpectrum> per_d;
  for (int d = 1; d <= d_max; ++d)
    per_d.push_back(UnivariateSpectrum::from_values(std::vector<double>(static_cast<std::size_t>(std::pow(3, d)), 1.0)));
  return SpectrumModel::explicit_model(per_d);
}

CriterionParams params(double tau, int d_max) {
  CriterionParams p;
  p.tau = tau;
  p.d_max = d_max;
  return p;
}

}  // namespace

// ---------------------------------------------------------------- ALG-SPT

TEST(AlgSpt, WeightedGeometricHolds) {
  const auto m = wk(1.0, WeightSequence::geometric(0.25));
  const auto v = alg_spt_check(m, params(1.0, 30));
  EXPECT_EQ(v.status, VerdictStatus::HoldsUpToDmax) << v.basis;
  ASSERT_EQ(v.per_d.size(), 30u);
  double prod = 1.0;
  for (int j = 1; j <= 30; ++j) prod *= 1.0 + 2.0 * std::pow(4.0, -j) * kZeta2;
  for (std::size_t i = 1; i < v.per_d.size(); ++i) EXPECT_GE(v.per_d[i].value, v.per_d[i - 1].value);
  EXPECT_NEAR(v.per_d.back().value, prod, 1e-8 * prod);
  EXPECT_LE(v.sup_estimate, prod * (1 + 1e-9));
  EXPECT_FALSE(v.caveat.empty());
}

TEST(AlgSpt, WeightedGeometricBruteAtSmallD) {
  // brute box sum for d <= 2 against the product closed form
  const auto m = wk(1.0, WeightSequence::geometric(0.25));
  const auto v = alg_spt_check(m, params(1.0, 2));
  const int R = 3000;
  double s1 = 1.0;
  for (int h = 1; h <= R; ++h) s1 += 2.0 * 0.25 / (double(h) * h);
  double s2 = 1.0;
  for (int h = 1; h <= R; ++h) s2 += 2.0 * 0.0625 / (double(h) * h);
  EXPECT_NEAR(v.per_d[0].value, s1, 1e-3);
  EXPECT_NEAR(v.per_d[1].value, s1 * s2, 1e-3);
}

TEST(AlgSpt, KorobovGrowsGeometrically) {
  const auto v = alg_spt_check(SpectrumModel::korobov(1.0), params(1.0, 10));
  EXPECT_EQ(v.status, VerdictStatus::ViolatedAtD);
  ASSERT_TRUE(v.growth_slope.has_value());
  EXPECT_NEAR(*v.growth_slope, std::log(1 + 2 * kZeta2), 1e-6);
  EXPECT_NEAR(std::log(1 + 2 * kZeta2), 1.456256, 1e-6);
  for (const auto& pd : v.per_d) EXPECT_NEAR(pd.value, std::pow(1 + 2 * kZeta2, pd.d), 1e-8 * pd.value);
  EXPECT_GT(v.certified_lower_bound, 0.0);
}

TEST(AlgSpt, DimensionFreeGeometric) {
  const auto v = alg_spt_check(geo_half(), params(1.0, 100));
  EXPECT_EQ(v.status, VerdictStatus::HoldsUpToDmax);
  EXPECT_NEAR(v.sup_estimate, 1.0, 1e-12);
}

TEST(AlgSpt, KorobovSmallTauDiverges) {
  const auto v = alg_spt_check(SpectrumModel::korobov(1.0), params(0.5, 5));
  EXPECT_EQ(v.status, VerdictStatus::DivergesForAllTestedParams);
}

TEST(AlgSpt, RejectsBadParams) {
  EXPECT_THROW(alg_spt_check(geo_half(), params(0.0, 3)), InvalidParameter);
  EXPECT_THROW(alg_spt_check(geo_half(), params(1.0, 0)), InvalidParameter);
}

TEST(AlgSptExponent, Examples) {
  EXPECT_NEAR(alg_spt_exponent(wk(1.0, WeightSequence::power(2.0)), 1, 10), 1.0, 2e-3);
  EXPECT_NEAR(alg_spt_exponent(wk(2.0, WeightSequence::power(4.0)), 1, 10), 0.5, 2e-3);
  EXPECT_NEAR(alg_spt_exponent(wk(1.0, WeightSequence::geometric(0.5)), 1, 10), 1.0, 2e-3);
  EXPECT_NEAR(alg_spt_exponent(inv_power(4.0), 1, 10), 0.5, 2e-3);
}

TEST(AlgSptExponent, NoneForUnweighted) {
  EXPECT_TRUE(std::isinf(alg_spt_exponent(SpectrumModel::korobov(1.0), 1, 6)));
}

// ---------------------------------------------------------------- ALG-PT

TEST(AlgPt, ReducesToSptProperty) {
  const std::vector<SpectrumModel> models{geo_half(), inv_power(4.0), SpectrumModel::korobov(1.0),
                                          wk(1.0, WeightSequence::geometric(0.25)), wk(1.0, WeightSequence::power(2.0)),
                                          three_pow_indicator(6)};
  for (const auto& m : models)
    for (double tau : {0.6, 1.0, 2.0})
      for (std::uint64_t L : {1u, 3u}) {
        auto p = params(tau, 6);
        p.L = L;
        p.tau1 = p.tau2 = 0.0;
        p.tau3 = tau;
        p.H = static_cast<double>(L);
        const auto a = alg_spt_check(m, p), b = alg_pt_check(m, p);
        EXPECT_EQ(a.status, b.status) << m.kind_name() << " tau=" << tau << " L=" << L;
        ASSERT_EQ(a.per_d.size(), b.per_d.size());
        for (std::size_t i = 0; i < a.per_d.size(); ++i)
          EXPECT_NEAR(a.per_d[i].value, b.per_d[i].value, 1e-12 * std::max(1.0, a.per_d[i].value));
      }
}

TEST(AlgPt, KorobovUnboundedTrend) {
  auto p = params(1.0, 8);
  p.tau1 = 2.0;
  p.tau2 = 1.0;
  p.tau3 = 1.0;
  p.H = 1.0;
  const auto v = alg_pt_check(SpectrumModel::korobov(1.0), p);
  EXPECT_EQ(v.status, VerdictStatus::ViolatedAtD);
  for (const auto& pd : v.per_d) EXPECT_GE(pd.value * std::pow(pd.d, 2.0), std::pow(3.0, pd.d) - pd.d - 1e-9);
}

TEST(AlgPt, GeometricShiftedStart) {
  auto p = params(1.0, 50);
  p.tau1 = 0.0;
  p.tau2 = 1.0;
  p.tau3 = 1.0;
  p.H = 1.0;
  const auto v = alg_pt_check(geo_half(), p);
  EXPECT_EQ(v.status, VerdictStatus::HoldsUpToDmax);
  for (const auto& pd : v.per_d) EXPECT_NEAR(pd.value, std::pow(2.0, 1 - pd.d), 1e-12);
  EXPECT_NEAR(v.sup_estimate, 1.0, 1e-12);
}

// ---------------------------------------------------------------- ALG-WT

TEST(AlgWt, KorobovHalf) {
  auto p = params(1.0, 12);
  p.c_grid = {0.5};
  const auto v = alg_wt_check(SpectrumModel::korobov(1.0), p);
  EXPECT_EQ(v.status, VerdictStatus::ViolatedAtD);
  ASSERT_EQ(v.traces.size(), 1u);
  const double certified = -0.5 + std::log(1 + 2 * std::exp(-0.5));
  EXPECT_NEAR(certified, 0.294377, 1e-6);
  ASSERT_TRUE(v.growth_slope.has_value());
  EXPECT_GE(*v.growth_slope, certified);
  // per-d values sit above the univariate power of the first shell
  for (const auto& pd : v.traces[0].per_d)
    EXPECT_GE(pd.value, std::exp(pd.d * certified) * (1 - 1e-9)) << "d=" << pd.d;
}

TEST(AlgWt, InversePowerHolds) {
  auto p = params(1.0, 30);
  p.c_grid = {0.1, 1.0, 10.0};
  const auto v = alg_wt_check(inv_power(2.0), p);
  EXPECT_EQ(v.status, VerdictStatus::HoldsUpToDmax);
  ASSERT_EQ(v.traces.size(), 3u);
  for (const auto& t : v.traces) {
    EXPECT_EQ(t.status, VerdictStatus::HoldsUpToDmax);
    const double c = t.param;
    for (const auto& pd : t.per_d)
      EXPECT_NEAR(pd.value, std::exp(-c * pd.d) * std::exp(-c) / (1 - std::exp(-c)), 1e-8 * pd.value + 1e-300);
  }
}

TEST(AlgWt, ThreePowIndicatorViolated) {
  auto p = params(1.0, 10);
  p.c_grid = {1.0};
  const auto v = alg_wt_check(three_pow_indicator(10), p);
  EXPECT_EQ(v.status, VerdictStatus::ViolatedAtD);
  for (const auto& pd : v.traces[0].per_d)
    EXPECT_GE(pd.value, std::exp(-pd.d) * std::pow(3.0, pd.d) * std::exp(-1.0) * (1 - 1e-12));
  ASSERT_TRUE(v.growth_slope.has_value());
  EXPECT_NEAR(*v.growth_slope, kLn3 - 1.0, 1e-9);
}

// ---------------------------------------------------------------- tensor classification

TEST(TensorClassify, Examples) {
  using UT = UnivariateSpectrum::Tail;
  EXPECT_EQ(tensor_classify(UnivariateSpectrum::from_values({2.0, 0.1}, UT::Geometric, 1.0, 0.05)).label,
            TensorClass::IntractableLambdaAboveOne);
  EXPECT_EQ(tensor_classify(UnivariateSpectrum::from_values({1.0, 1.0, 0.25})).label,
            TensorClass::IntractableDegenerateTop);
  const auto c = tensor_classify(UnivariateSpectrum::from_values({1.0, 0.5, 0.25}, UT::Geometric, 1.0, 0.5));
  EXPECT_EQ(c.label, TensorClass::NoPTMaybeWT);
  EXPECT_FALSE(c.caveat.empty());
  EXPECT_EQ(tensor_classify(UnivariateSpectrum::geometric(0.5, 0.5)).label, TensorClass::WTPTSPTPossible);
  EXPECT_THROW(tensor_classify(UnivariateSpectrum::from_values({})), InvalidParameter);
}

TEST(TensorClassify, InvariantUnderAppendingSmallerValues) {
  const std::vector<std::vector<double>> prefixes{{2.0, 0.1}, {1.0, 1.0, 0.25}, {1.0, 0.5}, {0.8, 0.3}, {1.0}};
  for (const auto& pre : prefixes) {
    const auto base = tensor_classify(UnivariateSpectrum::from_values(pre)).label;
    auto ext = pre;
    for (int k = 0; k < 5; ++k) {
      ext.push_back(ext.back() * 0.1);
      EXPECT_EQ(tensor_classify(UnivariateSpectrum::from_values(ext)).label, base);
    }
  }
}

// ---------------------------------------------------------------- product weights

TEST(ProductWeights, Examples) {
  auto r = product_weight_report(1.0, WeightSequence::power(2.0));
  EXPECT_DOUBLE_EQ(r.p_gamma, 0.5);
  EXPECT_TRUE(r.spt);
  EXPECT_TRUE(r.pt);
  ASSERT_TRUE(r.spt_exponent.has_value());
  EXPECT_DOUBLE_EQ(*r.spt_exponent, 1.0);
  EXPECT_TRUE(r.wt);

  r = product_weight_report(1.0, WeightSequence::constant(1.0));
  EXPECT_TRUE(std::isinf(r.p_gamma));
  EXPECT_FALSE(r.spt);
  EXPECT_FALSE(r.pt);
  EXPECT_FALSE(r.wt);

  r = product_weight_report(1.0, WeightSequence::geometric(0.5));
  EXPECT_DOUBLE_EQ(r.p_gamma, 0.0);
  EXPECT_DOUBLE_EQ(*r.spt_exponent, 1.0);

  r = product_weight_report(1.0, WeightSequence::explicit_list({0.5, 0.25}));
  EXPECT_DOUBLE_EQ(r.p_gamma, 0.0);
  EXPECT_FALSE(r.notes.empty());
}

TEST(ProductWeights, SptImpliesBoundedTrend) {
  for (auto g : {WeightSequence::power(2.0), WeightSequence::geometric(0.5)}) {
    const auto r = product_weight_report(1.0, g);
    ASSERT_TRUE(r.spt);
    const double tau = 0.5 * *r.spt_exponent + 0.1;
    EXPECT_TRUE(alg_spt_check(wk(1.0, g), params(tau, 20)).holds());
    EXPECT_EQ(r.spt, r.pt);
  }
}

// ---------------------------------------------------------------- EXP

TEST(ExpSpt, DoublyExponentialHolds) {
  std::vector<double> logs;
  for (int n = 1; n <= 60; ++n) logs.push_back(-std::pow(2.0, n) * std::log(2.0));
  const auto m = SpectrumModel::explicit_model({UnivariateSpectrum::from_logs(logs, UnivariateSpectrum::Tail::Zero)});
  const auto v = exp_spt_check(m, params(0.5, 10));
  EXPECT_EQ(v.status, VerdictStatus::HoldsUpToDmax);
  double s = 0.0;
  for (int n = 1; n <= 60; ++n) s += std::exp(-std::pow(2.0, n) * std::log(2.0) / std::sqrt(n));
  EXPECT_NEAR(v.per_d[0].value, s * s, 1e-10);  // (sum)^{1/tau}
}

TEST(ExpSpt, KorobovDiverges) {
  for (double tau : {0.1, 1.0, 5.0})
    EXPECT_EQ(exp_spt_check(SpectrumModel::korobov(1.0), params(tau, 4)).status,
              VerdictStatus::DivergesForAllTestedParams);
}

TEST(ExpSpt, AnalyticKorobovHolds) {
  const auto v = exp_spt_check(analytic_ej(), params(0.1, 3));
  EXPECT_EQ(v.status, VerdictStatus::HoldsUpToDmax) << v.basis;
  for (const auto& pd : v.per_d) {
    EXPECT_TRUE(std::isfinite(pd.value));
    EXPECT_GT(pd.value, 0.0);
  }
}

TEST(ExpSpt, ExponentBelowAchievableBound) {
  const auto crit = analytic_exp_spt_criterion(WeightSequence::geometric(std::exp(1.0)), WeightSequence::power(-2.0));
  const double p = exp_spt_exponent(analytic_ej(), 1, 3);
  EXPECT_TRUE(std::isfinite(p));
  EXPECT_LE(p, crit.B + kLn3 / crit.alpha_star + 1.0 + 0.1);
}

TEST(ExpPt, ReducesToSpt) {
  auto p = params(0.5, 4);
  p.tau3 = 0.5;
  const auto a = exp_spt_check(geo_half(), p), b = exp_pt_check(geo_half(), p);
  EXPECT_EQ(a.status, b.status);
  for (std::size_t i = 0; i < a.per_d.size(); ++i) EXPECT_NEAR(a.per_d[i].value, b.per_d[i].value, 1e-12);
}

// ---------------------------------------------------------------- analytic Korobov criterion

TEST(AnalyticCriterion, Examples) {
  auto r = analytic_exp_spt_criterion(WeightSequence::geometric(std::exp(1.0)), WeightSequence::power(-2.0));
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.B, kZeta2, 1e-12);
  EXPECT_NEAR(r.alpha_star, 1.0, 1e-12);

  r = analytic_exp_spt_criterion(WeightSequence::constant(1.0), WeightSequence::power(-2.0));
  EXPECT_FALSE(r.holds);
  EXPECT_DOUBLE_EQ(r.alpha_star, 0.0);

  r = analytic_exp_spt_criterion(WeightSequence::geometric(std::exp(1.0)), WeightSequence::constant(1.0));
  EXPECT_FALSE(r.holds);
  EXPECT_TRUE(std::isinf(r.B));

  EXPECT_THROW(analytic_exp_spt_criterion(WeightSequence::explicit_list({1.0, 2.0}), WeightSequence::power(-2.0)),
               Inconclusive);
}

// ---------------------------------------------------------------- sigma bound

TEST(SigmaBound, SingleCoordinate) {
  const auto one = WeightSequence::constant(1.0);
  const auto r = sigma_bound(one, one, 3.0, 1, 0.5, 2);
  ASSERT_FALSE(r.counting.empty());
  EXPECT_EQ(r.counting.back().ell, 2);
  EXPECT_EQ(r.counting.back().count, 5u);
  EXPECT_NEAR(r.partial, 2.0 * 1.2020569031595942, 1e-6);
  EXPECT_NEAR(2.0 * 1.2020569031595942, 2.404114, 1e-6);
}

TEST(SigmaBound, AnalyticPartialBelowUpper) {
  const auto a = WeightSequence::geometric(std::exp(1.0));
  const auto b = WeightSequence::power(-2.0);
  const double delta = 0.9;
  const double p = kZeta2 + kLn3 / delta + 1.1;
  const auto r = sigma_bound(a, b, p, 2, delta);
  EXPECT_FALSE(r.divergent_bound);
  EXPECT_TRUE(std::isfinite(r.upper));
  EXPECT_LE(r.partial, r.upper);
  EXPECT_LE(r.partial + r.partial_tail, r.upper * (1 + 1e-12));
  EXPECT_NEAR(r.exponent, kZeta2 + kLn3 / delta, 1e-12);
}

TEST(SigmaBound, CountingBoundRespected) {
  const auto a = WeightSequence::geometric(std::exp(1.0));
  const auto b = WeightSequence::power(-2.0);
  for (int d = 1; d <= 3; ++d)
    for (double delta : {0.5, 0.9}) {
      const auto r = sigma_bound(a, b, 10.0, d, delta, 20, 20);
      ASSERT_FALSE(r.counting.empty());
      for (const auto& c : r.counting) EXPECT_TRUE(c.ok) << "d=" << d << " ell=" << c.ell << " N=" << c.count;
    }
}

TEST(SigmaBound, DivergentBoundSignal) {
  const auto r = sigma_bound(WeightSequence::geometric(std::exp(1.0)), WeightSequence::power(-2.0), 2.0, 1, 0.9);
  EXPECT_TRUE(r.divergent_bound);
  EXPECT_GT(r.partial, 0.0);
}

// ---------------------------------------------------------------- growth models

TEST(Growth, SqrtProductFailsWeakTractability) {
  const auto g = growth_model_diagnostics(GrowthModel::parse("exp(sqrt(d)*sqrt(x))"));
  EXPECT_NEAR(g.diagonal_limit, 0.5, 1e-9);
  EXPECT_FALSE(g.wt_passes);
}

TEST(Growth, Crossover) {
  const auto n1 = GrowthModel::parse("10*d^10*x^10");
  const auto n2 = GrowthModel::parse("1.01^d*x");
  const auto g = growth_model_diagnostics(n1, {n2}, {{0.1, 10}});
  ASSERT_EQ(g.crossover.size(), 1u);
  EXPECT_NEAR(g.crossover[0].log10_values[0], 21.0, 1e-9);
  EXPECT_NEAR(std::pow(10.0, g.crossover[0].log10_values[1]), 11.046221, 1e-5);
  EXPECT_TRUE(g.wt_passes);
  ASSERT_TRUE(g.q && g.p);
  EXPECT_NEAR(*g.q, 10.0, 1e-6);
  EXPECT_NEAR(*g.p, 10.0, 1e-6);
}

TEST(Growth, QuasiPolynomial) {
  const auto g = growth_model_diagnostics(GrowthModel::parse("d^log(d)"));
  EXPECT_TRUE(g.wt_passes);
  EXPECT_FALSE(g.q.has_value());
}

TEST(Growth, ParseErrors) {
  EXPECT_THROW(GrowthModel::parse("d +"), InvalidParameter);
  EXPECT_THROW(GrowthModel::parse("foo(d)"), InvalidParameter);
  EXPECT_THROW(GrowthModel::parse("(d"), InvalidParameter);
  EXPECT_THROW(GrowthModel::parse("d x"), InvalidParameter);
}

// ---------------------------------------------------------------- constructive SPT bound

TEST(ConstructiveBound, WorstCaseWithinProofBound) {
  const std::vector<SpectrumModel> models{geo_half(), wk(1.0, WeightSequence::geometric(0.25))};
  for (const auto& m : models)
    for (double tau : {1.0, 2.0})
      for (std::uint64_t L : {1u, 2u}) {
        auto p = params(tau, 5);
        p.L = L;
        const auto v = alg_spt_check(m, p);
        ASSERT_TRUE(v.holds());
        const double M = v.sup_estimate;
        for (int d = 1; d <= 5; ++d)
          for (double eps : {0.05, 0.1, 0.3, 0.7}) {
            const auto n = n_worst({m, d, eps, ErrorCriterion::ABS, Setting::WORST});
            const double bound = L - 1.0 + std::ceil(std::pow(M / (eps * eps), tau));
            EXPECT_LE(static_cast<double>(n), bound) << m.kind_name() << " d=" << d << " eps=" << eps;
          }
      }
}
