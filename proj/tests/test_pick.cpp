#include <cmath>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "pickfn/pick.hpp"

using namespace pickfn;

namespace {

const cplx I(0.0, 1.0);

NuFunction two_atoms() { return {0.0, StieltjesMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}})}; }

void expect_close(cplx a, cplx b, double tol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

}  // namespace

TEST(EvalPick, Examples) {
  expect_close(eval_pick({1.0, 0.0, {}}, I), I, 1e-15);
  expect_close(eval_pick({0.0, 0.0, StieltjesMeasure::from_atoms({{0.0, 1.0}})}, I), I, 1e-15);
  // 1/(1 - i) - 1/2 = i/2
  expect_close(eval_pick({0.0, 0.0, StieltjesMeasure::from_atoms({{1.0, 1.0}})}, I), 0.5 * I, 1e-15);
  EXPECT_THROW(eval_pick({1.0, 0.0, {}}, 2.0), DomainError);
}

TEST(EvalPick, ReflectionAndPositivity) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = fixtures::random_primitive(seed);
    PickCanonical pc{p.alpha, p.beta, p.nu.measure()};
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const cplx z(-5.0 + 0.5 * i, 0.05 + 0.25 * j);
        const cplx w = eval_pick(pc, z);
        EXPECT_GE(w.imag(), -1e-12);
        if (i % 5 == 0 && j % 5 == 0) {
          EXPECT_EQ(eval_pick(pc, std::conj(z)), std::conj(w));
        }
      }
    }
  }
}

TEST(EvalPrimitive, Examples) {
  expect_close(eval_primitive({0.0, 0.0, NuFunction::heaviside(0.0)}, I), cplx(0.0, kPi / 2.0), 1e-15);
  for (cplx z : {I, cplx(-3.0, 0.2), cplx(7.0, 4.0)}) {
    expect_close(eval_primitive({0.0, 0.0, NuFunction::constant(0.5)}, z), cplx(0.0, kPi / 2.0), 1e-15);
  }
  expect_close(eval_primitive({1.0, 2.0, NuFunction{}}, I), cplx(2.0, 1.0), 1e-15);
  EXPECT_THROW(eval_primitive({1.0, 2.0, NuFunction{}}, -I), DomainError);
  EXPECT_THROW(PrimitivePick(-1.0, 0.0, {}), DomainError);
}

TEST(EvalPrimitive, TwoFormsAgree) {
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    const auto p = fixtures::random_primitive(seed);
    for (cplx z : fixtures::upper_points(seed, 12)) {
      const cplx a = eval_primitive(p, z);
      const cplx b = eval_primitive_nu_form(p, z);
      EXPECT_LT(std::abs(a - b), 1e-8) << "seed " << seed << " z " << z;
    }
  }
}

TEST(EvalPrimitive, NuFormReflectsOnLowerHalfPlane) {
  const auto p = fixtures::random_primitive(3);
  const cplx z(0.3, 0.7);
  const cplx up = eval_primitive_nu_form(p, z);
  const cplx down = eval_primitive_nu_form(p, std::conj(z));
  EXPECT_LT(std::abs(down - std::conj(up)), 1e-9);
  EXPECT_LT(std::abs(eval_primitive_reflected(p, std::conj(z)) - std::conj(up)), 1e-9);
}

TEST(Derivative, Examples) {
  expect_close(derivative({0.0, 0.0, NuFunction::heaviside(0.0)}, I), I, 1e-15);
  expect_close(derivative({3.0, 0.0, NuFunction{}}, cplx(2.0, 5.0)), 3.0, 1e-15);
  expect_close(derivative({0.0, 0.0, two_atoms()}, I), 0.5 * I, 1e-15);
}

TEST(Derivative, MatchesCentralDifference) {
  for (std::uint64_t seed = 200; seed < 204; ++seed) {
    const auto p = fixtures::random_primitive(seed);
    for (cplx z : fixtures::upper_points(seed, 6)) {
      const double h = 1e-5 * z.imag();
      const cplx fd = (eval_primitive(p, z + h) - eval_primitive(p, z - h)) / (2.0 * h);
      const cplx d = derivative(p, z);
      EXPECT_LT(std::abs(fd - d) / std::abs(d), 1e-6) << "seed " << seed << " z " << z;
    }
  }
}

TEST(HarmonicParts, Examples) {
  const PrimitivePick h{0.0, 0.0, NuFunction::heaviside(0.0)};
  EXPECT_NEAR(harmonic_parts(h, 0.0, 1.0).V, kPi / 2.0, 1e-15);
  EXPECT_NEAR(harmonic_parts(h, 1.0, 1.0).V, 3.0 * kPi / 4.0, 1e-15);
  EXPECT_NEAR(harmonic_parts({2.0, 0.0, NuFunction{}}, 0.7, 1.3).V, 2.6, 1e-15);
  EXPECT_THROW(harmonic_parts(h, 0.0, 0.0), DomainError);
}

TEST(HarmonicParts, MatchEvalPrimitive) {
  for (std::uint64_t seed = 300; seed < 304; ++seed) {
    const auto p = fixtures::random_primitive(seed);
    for (cplx z : fixtures::upper_points(seed, 8)) {
      const auto hp = harmonic_parts(p, z.real(), z.imag());
      const cplx w = eval_primitive(p, z);
      EXPECT_NEAR(hp.U, w.real(), 1e-10);
      EXPECT_NEAR(hp.V, w.imag(), 1e-10);
    }
  }
}

TEST(HarmonicParts, MonotoneForNonConstantNu) {
  for (std::uint64_t seed = 400; seed < 403; ++seed) {
    const auto p = fixtures::random_primitive(seed);
    for (double y : {0.1, 0.5, 2.0}) {
      double prev = -kInf;
      for (double x = -6.0; x <= 6.0; x += 0.5) {
        const double v = harmonic_parts(p, x, y).V;
        EXPECT_GT(v, prev);
        prev = v;
      }
    }
    for (double x : {-2.0, 0.0, 1.5}) {
      double prev = kInf;
      for (double y : {0.05, 0.1, 0.5, 1.0, 5.0}) {
        const double u = harmonic_parts(p, x, y).U - p.alpha * x;
        EXPECT_LT(u, prev);
        prev = u;
      }
    }
  }
}

TEST(BoundaryU, Examples) {
  EXPECT_NEAR(boundary_U({0.0, 0.0, NuFunction::heaviside(0.0)}, 2.0), std::log(0.5), 1e-15);
  EXPECT_NEAR(boundary_U({1.0, 0.0, NuFunction{}}, 5.0), 5.0, 1e-15);
  EXPECT_NEAR(boundary_U({0.0, 0.0, NuFunction::heaviside(1.0)}, 0.0), 0.5 * std::log(2.0), 1e-15);
  EXPECT_THROW(boundary_U({0.0, 0.0, NuFunction::heaviside(1.0)}, 1.0), DomainError);
}

TEST(BoundaryU, InsideDensityPiece) {
  // nu' = 1 on [-1, 1]: int_{-1}^{1} (log sqrt(1+t^2) - log|t|) dt at x = 0
  // = (log 2 - 2 + pi/2) + 2 = log 2 + pi/2
  const PrimitivePick p{0.0, 0.0, NuFunction(0.0, {{}, {DensityPiece::polynomial(-1.0, 1.0, {1.0})}})};
  EXPECT_NEAR(boundary_U(p, 0.0), std::log(2.0) + kPi / 2.0, 1e-9);
  // and it is the limit of U(x, y)
  EXPECT_NEAR(harmonic_parts(p, 0.0, 1e-7).U, boundary_U(p, 0.0), 1e-5);
}

TEST(BoundaryV, Examples) {
  const PrimitivePick h{0.0, 0.0, NuFunction::heaviside(0.0)};
  EXPECT_DOUBLE_EQ(boundary_V(h, 1.0), kPi);
  EXPECT_DOUBLE_EQ(boundary_V(h, 0.0), kPi / 2.0);
  EXPECT_DOUBLE_EQ(boundary_V({0.0, 0.0, two_atoms()}, 0.0), kPi / 2.0);
}

TEST(BoundaryV, PoissonLimitIsLinearInY) {
  const auto p = fixtures::random_primitive(500);
  const auto bps = p.nu.measure().breakpoints();
  for (double x : {-3.3, -0.1, 0.77, 2.4}) {
    bool near_bp = false;
    for (double b : bps) near_bp = near_bp || std::abs(b - x) < 0.05;
    if (near_bp) continue;
    double prev = kInf;
    for (double y : {1e-1, 1e-2, 1e-3}) {
      const double err = std::abs(harmonic_parts(p, x, y).V - p.alpha * y - boundary_V(p, x));
      EXPECT_LT(err, prev);
      EXPECT_LT(err, 50.0 * y);
      prev = err;
    }
  }
}
