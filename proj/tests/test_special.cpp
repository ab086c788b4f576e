#include <gtest/gtest.h>

#include <cmath>

#include "engm/error.hpp"
#include "engm/special_functions.hpp"
#include "oracle_values.hpp"

using namespace engm;

namespace {

double rel_err(double got, double want) {
  if (want == 0.0) return std::fabs(got);
  return std::fabs(got - want) / std::fabs(want);
}

}  // namespace

TEST(Igamc, MatchesQuadratureOracle) {
  for (const auto& pt : oracle::kIgamc) {
    EXPECT_LT(rel_err(igamc(pt.a, pt.x), pt.q), 1e-10) << "a=" << pt.a << " x=" << pt.x;
  }
}

TEST(Igamc, ClosedForms) {
  EXPECT_NEAR(igamc(1.0, std::log(2.0)), 0.5, 1e-12);
  EXPECT_EQ(igamc(4.5, 0.0), 1.0);
  for (double x : {0.1, 1.0, 7.0, 40.0}) EXPECT_NEAR(igamc(1.0, x), std::exp(-x), 1e-14 + 1e-12 * std::exp(-x));
  EXPECT_NEAR(igamc(0.5, 2.0), std::erfc(std::sqrt(2.0)), 1e-14);
  EXPECT_NEAR(igam(3.0, 2.0) + igamc(3.0, 2.0), 1.0, 1e-15);
}

TEST(Igamc, MonotoneInX) {
  for (double a : {0.5, 2.0, 4.5, 50.0, 512.0}) {
    double prev = 1.0;
    for (double x = 0.0; x < 3.0 * a + 30.0; x += a / 50.0 + 0.05) {
      const double q = igamc(a, x);
      ASSERT_LE(q, prev) << "a=" << a << " x=" << x;
      ASSERT_GE(q, 0.0);
      prev = q;
    }
  }
}

TEST(Igamc, DomainErrors) {
  for (auto [a, x] : {std::pair{0.0, 1.0}, std::pair{-1.0, 1.0}, std::pair{1.0, -0.5},
                      std::pair{std::nan(""), 1.0}, std::pair{1.0, std::nan("")}}) {
    try {
      igamc(a, x);
      FAIL() << a << "," << x;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Domain);
    }
  }
}

TEST(Erfc, MatchesQuadratureOracle) {
  for (const auto& pt : oracle::kErfc) {
    EXPECT_LT(rel_err(engm::erfc(pt.x), pt.value), 1e-10) << "x=" << pt.x;
  }
}

TEST(NormalCdf, Values) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(normal_cdf(-1.0) + normal_cdf(1.0), 1.0, 1e-15);
}
