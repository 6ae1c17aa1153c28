#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tractlab/spectra.hpp"

using namespace tractlab;

namespace {

// Korobov-type eigenvalues over the box |h_j| <= R, computed directly and sorted.
std::vector<double> box_values(int d, const std::vector<int>& R, double alpha, const std::vector<double>& gamma) {
  std::vector<double> out;
  std::vector<int> h(d);
  for (int j = 0; j < d; ++j) h[j] = -R[j];
  while (true) {
    double v = 1.0;
    for (int j = 0; j < d; ++j)
      if (h[j] != 0) v *= gamma[j] * std::pow(std::abs(h[j]), -2.0 * alpha);
    out.push_back(v);
    int j = d - 1;
    while (j >= 0 && h[j] == R[j]) {
      h[j] = -R[j];
      --j;
    }
    if (j < 0) break;
    ++h[j];
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> stream_values(const SpectrumModel& m, int d, std::uint64_t k) {
  std::vector<double> out;
  for (const auto& e : eigenvalue_stream(m, d, k).values) out.push_back(e.value());
  return out;
}

SpectrumModel weighted4() { return SpectrumModel::weighted_korobov(1.0, WeightSequence::geometric(0.25)); }

}  // namespace

TEST(KorobovEigenvalue, Examples) {
  EXPECT_EQ(univariate_korobov_eigenvalue(0, 1.0), 1.0);
  EXPECT_EQ(univariate_korobov_eigenvalue(1, 1.0), 1.0);
  EXPECT_EQ(univariate_korobov_eigenvalue(2, 1.0), 0.25);
  EXPECT_EQ(univariate_korobov_eigenvalue(-2, 1.0), 0.25);
  EXPECT_THROW(univariate_korobov_eigenvalue(1, 0.5), InvalidParameter);
}

TEST(Zigzag, RoundTrip) {
  EXPECT_EQ(zigzag_rank(0), 0u);
  EXPECT_EQ(zigzag_rank(-1), 1u);
  EXPECT_EQ(zigzag_rank(1), 2u);
  EXPECT_EQ(zigzag_rank(-2), 3u);
  for (std::int64_t h = -50; h <= 50; ++h) EXPECT_EQ(zigzag_value(zigzag_rank(h)), h);
}

TEST(Stream, KorobovOneDimTies) {
  auto r = eigenvalue_stream(SpectrumModel::korobov(1.0), 1, 3);
  ASSERT_EQ(r.values.size(), 3u);
  const std::int64_t expect[] = {0, -1, 1};
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(r.values[i].log_value, 0.0);
    EXPECT_EQ(r.values[i].witness[0], expect[i]);
    EXPECT_EQ(r.values[i].rank, static_cast<std::uint64_t>(i + 1));
  }
}

TEST(Stream, KorobovTwoDimMatchesBruteBox) {
  const auto got = stream_values(SpectrumModel::korobov(1.0), 2, 10);
  const auto ref = box_values(2, {8, 8}, 1.0, {1, 1});
  for (int i = 0; i < 10; ++i) EXPECT_DOUBLE_EQ(got[i], ref[i]);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(got[i], 1.0);
  EXPECT_EQ(got[9], 0.25);
}

TEST(Stream, TieOrderIsZigzagLex) {
  auto r = eigenvalue_stream(SpectrumModel::korobov(1.0), 2, 9);
  const std::vector<std::vector<std::int64_t>> expect = {{0, 0},  {0, -1},  {0, 1},  {-1, 0}, {-1, -1},
                                                         {-1, 1}, {1, 0}, {1, -1}, {1, 1}};
  for (int i = 0; i < 9; ++i) EXPECT_EQ(r.values[i].witness, expect[i]);
}

TEST(Stream, ExplicitGeometric) {
  auto m = SpectrumModel::explicit_model({UnivariateSpectrum::geometric(2.0, 0.5)});
  const auto v = stream_values(m, 1, 3);
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(v[1], 0.5);
  EXPECT_DOUBLE_EQ(v[2], 0.25);
}

TEST(Stream, FiniteExplicitIsTruncated) {
  auto m = SpectrumModel::explicit_model({UnivariateSpectrum::from_values({1.0, 0.5, 0.0})});
  auto r = eigenvalue_stream(m, 1, 5);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.values.size(), 2u);
}

TEST(Stream, WeightAboveOnePlacesZeroInside) {
  auto m = SpectrumModel::weighted_korobov(1.0, WeightSequence::explicit_list({4.0}));
  auto r = eigenvalue_stream(m, 1, 6);
  const std::int64_t expect[] = {-1, 1, 0, -2, 2, -3};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(r.values[i].witness[0], expect[i]) << i;
  EXPECT_NEAR(r.values[5].value(), 4.0 / 9.0, 1e-15);
}

TEST(Stream, BudgetExceededReportsRank) {
  try {
    auto r = eigenvalue_stream(SpectrumModel::korobov(1.0), 3, 1000, StreamOptions{50});
    FAIL() << "expected ResourceLimit";
  } catch (const ResourceLimit& e) {
    EXPECT_GT(e.completed_rank, 0u);
    EXPECT_LT(e.completed_rank, 1000u);
  }
}

TEST(Stream, NonIncreasingForAllModels) {
  const std::vector<SpectrumModel> models = {
      SpectrumModel::korobov(1.0),
      SpectrumModel::korobov(0.75),
      weighted4(),
      SpectrumModel::weighted_korobov(2.0, WeightSequence::power(4.0)),
      SpectrumModel::analytic_korobov(0.5, WeightSequence::geometric(std::exp(1.0)), WeightSequence::power(-2.0)),
      SpectrumModel::analytic_korobov(0.7, WeightSequence::constant(1.0), WeightSequence::constant(0.5)),
      SpectrumModel::tensor(UnivariateSpectrum::from_values({1.0, 0.5}, UnivariateSpectrum::Tail::PowerLaw, 1.0, 2.0)),
      SpectrumModel::explicit_model({UnivariateSpectrum::power_law(1.0, 4.0)}),
  };
  for (const auto& m : models)
    for (int d = 1; d <= 5; ++d) {
      auto r = eigenvalue_stream(m, d, 10000);
      for (std::size_t i = 1; i < r.values.size(); ++i)
        ASSERT_LE(r.values[i].log_value, r.values[i - 1].log_value) << m.kind_name() << " d=" << d << " i=" << i;
    }
}

TEST(Stream, Top500MatchesBruteBox) {
  // per-coordinate radii chosen so that at least 500 box values exceed every outside value
  using Radii = std::vector<std::vector<int>>;
  const Radii iso = {{300}, {40, 40}, {16, 16, 16}, {12, 12, 12, 12}};
  const Radii aniso = {{300}, {150, 75}, {100, 50, 25}, {63, 31, 15, 7}};
  const std::vector<std::tuple<SpectrumModel, std::vector<double>, Radii>> cases = {
      {SpectrumModel::korobov(1.0), {1, 1, 1, 1}, iso},
      {SpectrumModel::korobov(2.0), {1, 1, 1, 1}, iso},
      {weighted4(), {0.25, 0.0625, 0.015625, 0.00390625}, aniso},
  };
  for (const auto& [m, g, radii] : cases)
    for (int d = 1; d <= 4; ++d) {
      const auto& R = radii[d - 1];
      double outside = 0.0;
      for (int j = 0; j < d; ++j) outside = std::max(outside, g[j] * std::pow(R[j] + 1.0, -2.0 * m.alpha));
      const auto ref = box_values(d, R, m.alpha, g);
      std::size_t certified = 0;
      while (certified < ref.size() && ref[certified] > outside) ++certified;
      ASSERT_GE(certified, 500u) << m.kind_name() << " d=" << d;
      const auto got = stream_values(m, d, 500);
      for (std::size_t i = 0; i < 500; ++i)
        ASSERT_NEAR(got[i], ref[i], 1e-13 * ref[i]) << m.kind_name() << " d=" << d << " i=" << i;
    }
}

TEST(Stream, WitnessReproducesLogValue) {
  auto m = weighted4();
  for (const auto& e : eigenvalue_stream(m, 3, 200).values)
    EXPECT_DOUBLE_EQ(witness_log_value(m, 3, e.witness), e.log_value);
}

TEST(Stream, FiftyDimensionalLogValueDoesNotUnderflow) {
  const std::vector<std::int64_t> w(50, 2);
  const double lv = witness_log_value(SpectrumModel::korobov(1.0), 50, w);
  EXPECT_TRUE(std::isfinite(lv));
  EXPECT_NEAR(lv, 50.0 * std::log(0.25), 1e-13 * 50.0 * std::log(4.0));
}

TEST(Count, Examples) {
  EXPECT_EQ(count_above(SpectrumModel::korobov(1.0), 2, 0.5).value, 9u);
  EXPECT_EQ(count_above(SpectrumModel::korobov(1.0), 3, 1.0).value, 0u);
  auto an = SpectrumModel::analytic_korobov(0.5, WeightSequence::constant(1.0), WeightSequence::constant(1.0));
  EXPECT_EQ(count_above(an, 1, 0.3).value, 3u);
}

TEST(Count, InfiniteAtZeroThreshold) {
  EXPECT_EQ(count_above(SpectrumModel::korobov(1.0), 2, 0.0).status, CountResult::Status::Infinite);
  auto fin = SpectrumModel::explicit_model({UnivariateSpectrum::from_values({1.0, 0.5, 0.2})});
  auto c = count_above(fin, 1, 0.0);
  EXPECT_TRUE(c.exact());
  EXPECT_EQ(c.value, 3u);
}

TEST(Count, OverflowFlag) {
  auto c = count_above(SpectrumModel::korobov(1.0), 6, 1e-6, 1000);
  EXPECT_EQ(c.status, CountResult::Status::Overflow);
}

TEST(Count, EigenspaceOfOnesHasThreeToTheD) {
  for (double alpha : {1.0, 2.0})
    for (int d = 1; d <= 8; ++d)
      for (double t : {std::pow(2.0, -2.0 * alpha), 0.5, 0.9, 0.999}) {
        auto c = count_above(SpectrumModel::korobov(alpha), d, t);
        ASSERT_EQ(c.value, static_cast<std::uint64_t>(std::pow(3, d))) << alpha << " " << d << " " << t;
      }
}

TEST(Count, AgreesWithStreamRank) {
  const std::vector<SpectrumModel> models = {
      SpectrumModel::korobov(1.0), weighted4(),
      SpectrumModel::analytic_korobov(0.5, WeightSequence::geometric(2.0), WeightSequence::constant(1.5)),
      SpectrumModel::tensor(UnivariateSpectrum::from_values({1.0, 0.5}, UnivariateSpectrum::Tail::Geometric, 1.0, 0.3)),
  };
  for (const auto& m : models)
    for (int d = 1; d <= 3; ++d) {
      auto r = eigenvalue_stream(m, d, 3000).values;
      for (double t : {0.9, 0.5, 0.25, 0.1, 0.05, 0.01, 0.003}) {
        std::uint64_t last = 0;
        for (const auto& e : r)
          if (exceeds(e.log_value, std::log(t))) last = e.rank;
        if (last == r.size()) continue;  // stream prefix too short to decide
        ASSERT_EQ(count_above(m, d, t).value, last) << m.kind_name() << " d=" << d << " t=" << t;
      }
    }
}

TEST(TailSum, KorobovClosedFormAgainstBruteSum) {
  // sum_h |h|^{-2} with an integral remainder bracket
  double s = 1.0;
  const long H = 2'000'000;
  for (long h = H; h >= 1; --h) s += 2.0 / (static_cast<double>(h) * h);
  const double rem_lo = 2.0 / (H + 1.0), rem_hi = 2.0 / H;
  auto r = tail_power_sum(SpectrumModel::korobov(1.0), 1, 1.0, 1);
  EXPECT_TRUE(r.exact);
  EXPECT_GE(r.value, s + rem_lo - 1e-12);
  EXPECT_LE(r.value, s + rem_hi + 1e-12);
  EXPECT_NEAR(r.value, 1.0 + std::numbers::pi * std::numbers::pi / 3.0, 1e-12);
  EXPECT_NEAR(r.value, 4.289868, 1e-6);
}

TEST(TailSum, ExplicitGeometric) {
  auto m = SpectrumModel::explicit_model({UnivariateSpectrum::geometric(1.0, 0.5)});
  EXPECT_NEAR(tail_power_sum(m, 1, 1.0, 1).value, 1.0, 1e-15);
  EXPECT_NEAR(tail_power_sum(m, 1, 1.0, 5).value, 0.0625, 1e-16);
}

TEST(TailSum, AnalyticUnivariate) {
  auto m = SpectrumModel::analytic_korobov(0.5, WeightSequence::constant(1.0), WeightSequence::constant(1.0));
  auto r = tail_power_sum(m, 1, 1.0, 1);
  EXPECT_LE(r.value, 3.0);
  EXPECT_GE(r.value + r.tail_bound, 3.0);
  EXPECT_NEAR(r.value, 3.0, 1e-9);
}

TEST(TailSum, AnalyticSubLinearExponentBracket) {
  // b = 1/2: brute sum of 2^{-sqrt h} to h = 4e6 has remainder below 1e-300
  auto m = SpectrumModel::analytic_korobov(0.5, WeightSequence::constant(1.0), WeightSequence::constant(0.5));
  double s = 0.0;
  for (long h = 4'000'000; h >= 1; --h) s += std::pow(0.5, std::sqrt(static_cast<double>(h)));
  auto r = tail_power_sum(m, 1, 1.0, 1);
  EXPECT_LE(r.value, 1.0 + 2.0 * s + 1e-12);
  EXPECT_GE(r.value + r.tail_bound, 1.0 + 2.0 * s - 1e-12);
}

TEST(TailSum, StartIndexSubtractsLeadingTerms) {
  auto m = SpectrumModel::korobov(1.0);
  auto full = tail_power_sum(m, 2, 1.0, 1);
  auto rest = tail_power_sum(m, 2, 1.0, 10);
  EXPECT_NEAR(full.value - rest.value, 9.0, 1e-12);
}

TEST(TailSum, DivergenceCarriesPartialSum) {
  try {
    tail_power_sum(SpectrumModel::korobov(1.0), 1, 0.5, 1);
    FAIL();
  } catch (const Divergence& e) {
    EXPECT_GT(e.partial_sum, 1.0);
  }
  auto pl = SpectrumModel::explicit_model({UnivariateSpectrum::power_law(1.0, 1.0)});
  EXPECT_THROW(tail_power_sum(pl, 1, 1.0, 1), Divergence);
}

TEST(TailSum, ClosedFormInsideStreamBracket) {
  auto m = weighted4();
  for (int d = 1; d <= 6; ++d)
    for (double tau : {1.0, 2.0}) {
      auto cf = tail_power_sum(m, d, tau, 1);
      auto st = stream_power_sum(m, d, tau, 1, 20000);
      ASSERT_LE(st.value, cf.value * (1 + 1e-12));
      ASSERT_GE(st.value + st.tail_bound, cf.value * (1 - 1e-12)) << d << " " << tau;
    }
}

TEST(TailSum, TensorIsPowerOfUnivariate) {
  auto u = UnivariateSpectrum::from_values({1.0, 0.5}, UnivariateSpectrum::Tail::Geometric, 1.0, 0.25);
  auto m = SpectrumModel::tensor(u);
  const double s1 = 1.0 + 0.5 + std::pow(0.25, 3) / 0.75;
  EXPECT_NEAR(tail_power_sum(m, 3, 1.0, 1).value, s1 * s1 * s1, 1e-12);
}

TEST(Validation, RejectsBadInputs) {
  EXPECT_THROW(SpectrumModel::korobov(0.5), InvalidParameter);
  EXPECT_THROW(UnivariateSpectrum::from_values({0.5, 1.0}), InvalidParameter);
  EXPECT_THROW(UnivariateSpectrum::from_values({-1.0}), InvalidParameter);
  EXPECT_THROW(UnivariateSpectrum::geometric(1.0, 1.0), InvalidParameter);
  EXPECT_THROW(UnivariateSpectrum::power_law(1.0, 0.0), InvalidParameter);
  EXPECT_THROW(UnivariateSpectrum::from_values({0.1}, UnivariateSpectrum::Tail::Geometric, 1.0, 0.9), InvalidParameter);
  EXPECT_THROW(SpectrumModel::weighted_korobov(1.0, WeightSequence::power(-1.0)), InvalidParameter);
  EXPECT_THROW(SpectrumModel::analytic_korobov(1.0, WeightSequence::constant(1), WeightSequence::constant(1)),
               InvalidParameter);
  EXPECT_THROW(SpectrumModel::analytic_korobov(0.5, WeightSequence::power(1.0), WeightSequence::constant(1)),
               InvalidParameter);
}
