#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pickfn/polylog.hpp"

using namespace pickfn;

namespace {

constexpr double kZeta3 = 1.2020569031595942;
const double kLn2 = std::log(2.0);

}  // namespace

TEST(Polylog, Examples) {
  const cplx a = polylog(0.0, cplx(0.0, 1.0));
  EXPECT_NEAR(std::abs(a - cplx(-0.5, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(polylog(1.0, 0.5).real(), kLn2, 1e-14);
  // pi^2/12 - ln^2(2)/2.
  EXPECT_NEAR(polylog(2.0, 0.5).real(), kPi * kPi / 12.0 - 0.5 * kLn2 * kLn2, 1e-14);
  EXPECT_EQ(polylog(1.5, 0.0), cplx(0.0));
}

TEST(Polylog, FractionalOrderMatchesHighPrecisionValues) {
  EXPECT_NEAR(polylog(0.5, 0.4).real(), 0.570131177369147850, 1e-14);
  const cplx v = polylog(0.5, cplx(0.3, 0.3));
  EXPECT_NEAR(v.real(), 0.249384644526052308, 1e-14);
  EXPECT_NEAR(v.imag(), 0.451244045660215183, 1e-14);
}

TEST(Polylog, IntegralRegionClosedForms) {
  // Li_1(z) = -log(1 - z).
  for (cplx z : {cplx(-2.0), cplx(0.0, 2.0), cplx(0.9, 0.1), cplx(-10.0, 3.0), cplx(0.7)}) {
    const cplx oracle = -std::log(1.0 - z);
    EXPECT_NEAR(std::abs(polylog(1.0, z) - oracle), 0.0, 1e-10 * std::max(1.0, std::abs(oracle))) << z;
  }
  EXPECT_NEAR(polylog(2.0, -1.0).real(), -kPi * kPi / 12.0, 1e-11);
  EXPECT_NEAR(polylog(3.0, -1.0).real(), -0.75 * kZeta3, 1e-11);
  // Li_2(z) + Li_2(1/z) = -pi^2/6 - log^2(-z)/2, with Li_2(1/z) from the series.
  for (cplx z : {cplx(-2.0), cplx(-3.0, 1.0), cplx(0.5, 2.5)}) {
    const cplx l = std::log(-z);
    const cplx oracle = -kPi * kPi / 6.0 - 0.5 * l * l - polylog_series(2.0, 1.0 / z);
    EXPECT_NEAR(std::abs(polylog(2.0, z) - oracle), 0.0, 1e-10) << z;
  }
}

TEST(Polylog, NearTheCut) {
  const cplx z(1.5, 1e-8);
  const cplx oracle = -std::log(1.0 - z);
  EXPECT_NEAR(std::abs(polylog(1.0, z) - oracle), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(polylog(1.0, std::conj(z)) - std::conj(oracle)), 0.0, 1e-7);
}

TEST(Polylog, Errors) {
  EXPECT_THROW(polylog(1.0, 1.0), DomainError);
  EXPECT_THROW(polylog(2.0, 3.0), DomainError);
  EXPECT_THROW(polylog(-0.5, 0.2), DomainError);
  EXPECT_THROW(polylog_series(1.0, 1.2), DomainError);
  EXPECT_THROW(polylog_integral(0.0, 0.2), DomainError);
}

TEST(PolylogProperty, SeriesAndIntegralAgreeOnOverlapAnnulus) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> radius(0.3, 0.5), angle(-kPi, kPi), order(0.1, 4.0);
  for (int k = 0; k < 40; ++k) {
    const double alpha = order(rng);
    const cplx z = std::polar(radius(rng), angle(rng));
    const cplx s = polylog_series(alpha, z);
    const cplx i = polylog_integral(alpha, z);
    EXPECT_LE(std::abs(s - i), 1e-10) << "alpha " << alpha << " z " << z;
  }
}
