#include <cmath>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include "instances.hpp"
#include "pickfn/plog.hpp"

using namespace pickfn;

namespace {

const cplx I(0.0, 1.0);

NuFunction two_atoms() { return {0.0, StieltjesMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}})}; }

// sqrt(2) / (sqrt(-1 - z) sqrt(1 - z)), principal square root per factor.
cplx two_atom_phi(cplx z) { return std::sqrt(2.0) / (std::sqrt(-1.0 - z) * std::sqrt(1.0 - z)); }

PLogFunction random_plog(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double beta = u(rng);
  return {{beta, fixtures::random_nu(rng, 1.0)}};
}

void expect_close(cplx a, cplx b, double tol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

}  // namespace

TEST(EvalF, Examples) {
  expect_close(eval_f({0.0, NuFunction::heaviside(0.0)}, I), cplx(0.0, kPi / 2.0), 1e-15);
  for (cplx z : {I, cplx(2.0, 0.1), cplx(-4.0, 3.0)}) {
    expect_close(eval_f({0.0, NuFunction::constant(0.3)}, z), cplx(0.0, 0.3 * kPi), 1e-15);
    expect_close(eval_f({1.0, NuFunction{}}, z), 1.0, 1e-15);
  }
  EXPECT_THROW(LogPickPrimitive(0.0, NuFunction(0.5, StieltjesMeasure::from_atoms({{0.0, 0.6}}))),
               DomainError);
}

TEST(EvalF, ImaginaryPartInZeroPi) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto P = random_plog(seed);
    for (cplx z : fixtures::upper_points(seed, 30)) {
      const double im = eval_f(P.log_part, z).imag();
      EXPECT_GE(im, -1e-10);
      EXPECT_LE(im, kPi + 1e-10);
    }
  }
}

TEST(EvalPhi, Examples) {
  const PLogFunction h{{0.0, NuFunction::heaviside(0.0)}};
  expect_close(eval_phi(h, I), I, 1e-15);
  for (cplx z : {cplx(0.3, 0.2), cplx(-5.0, 1.0), cplx(2.0, 7.0)}) {
    expect_close(eval_phi(h, z), -1.0 / z, 1e-14);
  }
  expect_close(eval_phi({{0.0, two_atoms()}}, I), I, 1e-15);
  expect_close(eval_phi({{0.0, NuFunction{}}}, cplx(1.0, 1.0)), 1.0, 1e-15);
}

TEST(EvalPhi, TwoAtomClosedForm) {
  const PLogFunction p{{0.0, two_atoms()}};
  for (cplx z : fixtures::upper_points(9, 40)) {
    EXPECT_LT(std::abs(eval_phi(p, z) - two_atom_phi(z)), 1e-13) << z;
  }
}

TEST(EvalPhi, IsExpOfF) {
  const auto P = random_plog(21);
  for (cplx z : fixtures::upper_points(21, 10)) {
    EXPECT_EQ(eval_phi(P, z), std::exp(eval_f(P.log_part, z)));
  }
}

TEST(BoundaryPhi, Examples) {
  const PLogFunction h{{0.0, NuFunction::heaviside(0.0)}};
  expect_close(boundary_phi(h, 2.0), -0.5, 1e-15);
  expect_close(boundary_phi(h, -2.0), 0.5, 1e-15);
  expect_close(boundary_phi({{0.0, NuFunction{}}}, 3.0), 1.0, 1e-15);
  EXPECT_THROW(boundary_phi(h, 0.0), DomainError);
}

TEST(BoundaryPhi, ProductFormAndNonTangentialLimit) {
  for (std::uint64_t seed = 30; seed < 34; ++seed) {
    const auto P = random_plog(seed);
    const auto bps = P.log_part.nu.measure().breakpoints();
    for (double x : {-4.6, -1.3, 0.2, 1.7, 3.6}) {
      bool near_bp = false;
      for (double b : bps) near_bp = near_bp || std::abs(b - x) < 0.05;
      if (near_bp) continue;
      const cplx b = boundary_phi(P, x);
      const double m = std::exp(boundary_log_modulus(P.log_part, x));
      const double c = P.log_part.nu.cdf(x);
      EXPECT_NEAR(b.real(), std::cos(kPi * c) * m, 1e-10);
      EXPECT_NEAR(b.imag(), std::sin(kPi * c) * m, 1e-10);
      // phi(x + iy) approaches the boundary value linearly in y.
      EXPECT_LT(std::abs(eval_phi(P, cplx(x, 1e-6)) - b), 1e-4 * (1.0 + std::abs(b)));
    }
  }
}

TEST(DetectExceptional, Examples) {
  const auto h = detect_exceptional(NuFunction::heaviside(0.0));
  ASSERT_TRUE(h);
  EXPECT_DOUBLE_EQ(h->theta, 1.0);
  EXPECT_DOUBLE_EQ(h->a, 0.0);
  EXPECT_DOUBLE_EQ(h->theta1, 0.0);

  const auto c = detect_exceptional(NuFunction::constant(0.25));
  ASSERT_TRUE(c);
  EXPECT_DOUBLE_EQ(c->theta, 0.0);
  EXPECT_DOUBLE_EQ(c->theta1, 0.25);
  EXPECT_FALSE(c->has_point());

  EXPECT_FALSE(detect_exceptional(two_atoms()));
}

TEST(DetectExceptional, ClosedFormMatchesEvaluation) {
  // nu = 0.2 + 0.5 H(t - 1.5): theta = 0.5, theta1 = 0.4.
  const NuFunction n(0.2, StieltjesMeasure::from_atoms({{1.5, 0.5}}));
  const auto e = detect_exceptional(n, 0.3);
  ASSERT_TRUE(e);
  EXPECT_DOUBLE_EQ(e->theta1, 0.4);
  for (cplx z : fixtures::upper_points(4, 10)) {
    // The sqrt(1 + a^2) factor sits in beta for the closed form.
    ExceptionalParams shifted = *e;
    shifted.beta += e->theta * 0.5 * std::log1p(e->a * e->a);
    EXPECT_LT(std::abs(eval_phi({{0.3, n}}, z) - eval_exceptional(shifted, z)), 1e-13);
  }
}

TEST(DetectExceptional, NoneIffTwoSupportPoints) {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 40; ++k) {
    const auto n = fixtures::random_nu(rng, 1.0);
    EXPECT_EQ(!detect_exceptional(n).has_value(), support_count_at_least_two(n.measure()));
  }
  const NuFunction one(0.1, StieltjesMeasure::from_atoms({{2.0, 0.3}}));
  EXPECT_TRUE(detect_exceptional(one).has_value());
  EXPECT_FALSE(support_count_at_least_two(one.measure()));
}

TEST(VFromNu, Examples) {
  EXPECT_NEAR(v_from_nu(two_atoms(), 0.0, 0.0), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(v_from_nu(two_atoms(), 0.0, -3.0), 0.0);
  EXPECT_THROW(v_from_nu(NuFunction::heaviside(0.0), 0.0, 1.0), DomainError);
  EXPECT_THROW(v_from_nu(two_atoms(), 0.0, 1.0), DomainError);
}

TEST(VFromNu, TwoAtomClosedFormAndSign) {
  for (double x = -0.95; x < 0.96; x += 0.05) {
    EXPECT_NEAR(v_from_nu(two_atoms(), 0.0, x), std::sqrt(2.0) / std::sqrt(1.0 - x * x), 1e-12);
  }
  EXPECT_DOUBLE_EQ(v_from_nu(two_atoms(), 0.0, 1.5), 0.0);
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    const auto P = random_plog(seed);
    for (double x = -6.03; x < 6.0; x += 0.37) {
      const double v = v_from_nu(P.log_part.nu, P.log_part.beta, x);
      EXPECT_GE(v, 0.0);
      EXPECT_NEAR(v, boundary_phi(P, x).imag(), 1e-12 * (1.0 + v));
    }
  }
}

TEST(Membership, MinusOneOverZIsMember) {
  const auto r = membership_test([](cplx z) { return -1.0 / z; }, GridSpec::standard());
  EXPECT_EQ(r.overall, MembershipReport::Overall::member);
  for (const auto& c : r.criteria) EXPECT_TRUE(c.pass);
}

TEST(Membership, IdentityFailsModulusCondition) {
  const auto r = membership_test([](cplx z) { return z; }, GridSpec::standard());
  EXPECT_EQ(r.overall, MembershipReport::Overall::non_member);
  EXPECT_FALSE(r.criteria[0].pass);
  EXPECT_GT(r.criteria[0].worst, 0.0);
}

TEST(Membership, DecreasingPhaseFailsArgumentCondition) {
  // f = int_{-inf}^0 (1/(t - z) - t/(1 + t^2)) dt, phase rho = 1 - H; by quadrature.
  auto phi = [](cplx z) {
    boost::math::quadrature::exp_sinh<double> es;
    auto g = [z](double s) -> cplx { return 1.0 / (-s - z) + s / (1.0 + s * s); };
    return std::exp(es.integrate(g, 0.0, kInf, 1e-13));
  };
  const auto r = membership_test(phi, GridSpec::standard());
  EXPECT_EQ(r.overall, MembershipReport::Overall::non_member);
  EXPECT_FALSE(r.criteria[1].pass);
}

TEST(Membership, MobiusFromBoxPhaseFails) {
  // phase chi_[-1,1] gives phi = (z - 1)/(z + 1), a Pick function outside P_log.
  const auto r = membership_test([](cplx z) { return (z - 1.0) / (z + 1.0); }, GridSpec::standard());
  EXPECT_TRUE(r.pick_range);
  EXPECT_EQ(r.overall, MembershipReport::Overall::non_member);
  EXPECT_FALSE(r.criteria[0].pass);
}

TEST(Membership, NonPickIsRejected) {
  const auto r = membership_test([](cplx z) { return 1.0 / (1.0 + z); }, GridSpec::standard());
  EXPECT_FALSE(r.pick_range);
  EXPECT_EQ(r.overall, MembershipReport::Overall::non_member);
}

TEST(Membership, EvaluationFailureIsInconclusive) {
  const auto r = membership_test(
      [](cplx z) -> cplx {
        if (z.real() > 5.0) throw ConvergenceError("no", 1.0);
        return -1.0 / z;
      },
      GridSpec::standard());
  EXPECT_EQ(r.overall, MembershipReport::Overall::inconclusive);
  EXPECT_FALSE(r.failure.empty());
}

TEST(MembershipProperty, ConstructedMembersPassAllFour) {
  for (std::uint64_t seed = 50; seed < 55; ++seed) {
    const auto P = random_plog(seed);
    const auto r = membership_test(P);
    EXPECT_EQ(r.overall, MembershipReport::Overall::member) << "seed " << seed;
    for (int k = 0; k < 4; ++k) {
      EXPECT_TRUE(r.criteria[k].pass) << "seed " << seed << " criterion " << k + 1 << " worst "
                                      << r.criteria[k].worst << " at " << r.criteria[k].x << ","
                                      << r.criteria[k].y;
    }
  }
  const auto r = membership_test(PLogFunction{{0.0, two_atoms()}});
  EXPECT_EQ(r.overall, MembershipReport::Overall::member);
}
