#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "engm/analysis.hpp"
#include "engm/error.hpp"

using namespace engm;

namespace {

std::vector<double> uniform_series(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

double entropy_bits(const Histogram& h) {
  double H = 0.0;
  for (auto c : h.counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(h.total);
    H -= p * std::log2(p);
  }
  return H;
}

}  // namespace

TEST(MutualInformation, LagZeroIsEntropy) {
  const auto v = uniform_series(50000, 1);
  const std::vector<std::vector<double>> one{v};
  const auto q = QuantizedEnsemble::real(one, 16);
  EXPECT_NEAR(q.mutual_information(0), entropy_bits(q.histogram()), 1e-12);
}

TEST(MutualInformation, ConstantSeriesIsZero) {
  const std::vector<double> c(5000, 3.25);
  EXPECT_EQ(mutual_information(c, 1, 8), 0.0);
  const Bits ones(5000, 1);
  EXPECT_EQ(mutual_information_bits(ones, 3), 0.0);
}

TEST(MutualInformation, PeriodTwoIsOneBit) {
  Bits b(10000);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::uint8_t>(i & 1);
  EXPECT_NEAR(mutual_information_bits(b, 1), 1.0, 1e-7);
  EXPECT_NEAR(mutual_information_bits(b, 2), 1.0, 1e-7);
  std::vector<double> v(10000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i & 1) ? 1.0 : -1.0;
  EXPECT_NEAR(mutual_information(v, 1, 4), 1.0, 1e-7);
}

TEST(MutualInformation, IndependentIsSmall) {
  const auto v = uniform_series(1000000, 2);
  EXPECT_LT(mutual_information(v, 1, 8), 1e-4);
  std::mt19937 gen(3);
  Bits b(1000000);
  for (auto& x : b) x = static_cast<std::uint8_t>(gen() >> 31);
  EXPECT_LT(mutual_information_bits(b, 1), 1e-4);
}

TEST(MutualInformation, NonNegativeAndSymmetric) {
  JointHistogram j(3, 3);
  std::mt19937 gen(4);
  for (int i = 0; i < 1000; ++i) j.add(gen() % 3, (gen() % 2) ? 0 : gen() % 3);
  const double mi = mutual_information(j);
  EXPECT_GE(mi, 0.0);
  EXPECT_NEAR(mi, mutual_information(j.transposed()), 1e-14);
  EXPECT_EQ(j.row_marginal(), j.transposed().col_marginal());
  EXPECT_EQ(mutual_information(JointHistogram(2, 2)), 0.0);
}

TEST(MutualInformation, Marginals) {
  JointHistogram j(2, 3);
  j.add(0, 0);
  j.add(0, 2);
  j.add(1, 2);
  EXPECT_EQ(j.row_marginal(), (std::vector<std::uint64_t>{2, 1}));
  EXPECT_EQ(j.col_marginal(), (std::vector<std::uint64_t>{1, 0, 2}));
  EXPECT_EQ(j.total(), 3u);
}

TEST(MutualInformation, InsufficientData) {
  const auto v = uniform_series(1000, 5);
  try {
    mutual_information(v, 1, 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
  EXPECT_THROW(mutual_information(v, 1, 1), Error);
  EXPECT_THROW(mutual_information_bits(Bits{0, 1, 2, 0, 1, 0, 1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 1), Error);
}

TEST(MutualInformation, EnsemblePoolsPairs) {
  const auto a = uniform_series(3000, 6);
  const auto b = uniform_series(2000, 7);
  const auto q = QuantizedEnsemble::real({a, b}, 4);
  EXPECT_EQ(q.pair_count(5), 2995u + 1995u);
  EXPECT_EQ(q.joint(5).total(), 4990u);
  EXPECT_EQ(q.histogram().total, 5000u);
}

TEST(MiCurve, Shape) {
  const auto v = uniform_series(100000, 8);
  const auto c = mi_curve(v, 10, 16);
  ASSERT_EQ(c.size(), 10u);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i].lag, i + 1);
}

TEST(ChooseInterval, Examples) {
  const MiCurve c{{1, 0.5}, {2, 0.2}, {3, 0.009}, {4, 0.02}, {5, 0.001}};
  EXPECT_EQ(choose_sampling_interval(c, 0.01), 3u);
  EXPECT_EQ(choose_sampling_interval(c, 0.3), 2u);
  EXPECT_EQ(choose_sampling_interval(c, 0.6), 1u);
  try {
    choose_sampling_interval(c, 0.0005);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoCrossing);
  }
  EXPECT_THROW(choose_sampling_interval({}, 0.01), Error);
}

TEST(Csv, Format) {
  const MiCurve a{{1, 0.5}, {2, 0.25}};
  const MiCurve b{{1, 0.125}, {2, 0.0}};
  EXPECT_EQ(to_csv(a), "T,mi_bits\n1,0.5\n2,0.25\n");
  EXPECT_EQ(to_csv(a, b), "T,mi_a_bits,mi_b_bits\n1,0.5,0.125\n2,0.25,0\n");
  EXPECT_THROW(to_csv(a, MiCurve{{1, 0.0}}), Error);
}

TEST(Reference, MersenneBitsAreDeterministicAndBalanced) {
  const auto a = reference_rng_bits(100000);
  EXPECT_EQ(a, reference_rng_bits(100000));
  EXPECT_NE(a, reference_rng_bits(100000, 7));
  double ones = 0;
  for (auto x : a) ones += x;
  EXPECT_NEAR(ones / 100000.0, 0.5, 0.01);
  const auto [mi_a, mi_b] = mi_binary_compare(a, reference_rng_bits(100000, 9), 4);
  EXPECT_EQ(mi_a.size(), 4u);
  EXPECT_EQ(mi_b.size(), 4u);
}

TEST(Reference, EnsembleTrajectories) {
  const auto e = x_series_ensemble(SystemParams::defaults(), 3, 500, 100, 42);
  ASSERT_EQ(e.size(), 3u);
  for (const auto& s : e) EXPECT_EQ(s.size(), 500u);
  EXPECT_EQ(e, x_series_ensemble(SystemParams::defaults(), 3, 500, 100, 42));
}
