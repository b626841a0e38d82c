#include <cmath>
#include <random>

#include <boost/math/quadrature/sinh_sinh.hpp>
#include <gtest/gtest.h>

#include "instances.hpp"
#include "pickfn/hardy.hpp"

using namespace pickfn;

namespace {

NuFunction two_atoms() { return {0.0, StieltjesMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}})}; }

const PLogFunction kTwoAtom{{0.0, two_atoms()}};

// sqrt(2) / (sqrt(-1 - z) sqrt(1 - z)).
cplx two_atom_phi(cplx z) { return std::sqrt(2.0) / (std::sqrt(-1.0 - z) * std::sqrt(1.0 - z)); }

LineSpec atom_hints() {
  LineSpec s;
  s.hints = {-1.0, 1.0};
  return s;
}

PLogFunction random_member(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double beta = u(rng);
  return {{beta, fixtures::random_nu(rng, 1.0)}};
}

// A p inside the window, away from both ends.
double inner_p(const PWindow& w) { return w.lower + 0.5 * (std::min(w.upper, w.lower + 1.0) - w.lower); }

}  // namespace

TEST(PWindow, Examples) {
  const auto w = p_window(two_atoms());
  EXPECT_DOUBLE_EQ(w.lower, 1.0);
  EXPECT_DOUBLE_EQ(w.upper, 2.0);

  const NuFunction dens(0.0, StieltjesMeasure({}, {DensityPiece::polynomial(1.0, 3.0, {0.5})}));
  const auto d = p_window(dens);
  EXPECT_DOUBLE_EQ(d.lower, 1.0);
  EXPECT_TRUE(std::isinf(d.upper));

  const auto h = p_window(NuFunction::heaviside(0.0));
  EXPECT_DOUBLE_EQ(h.lower, 1.0);
  EXPECT_DOUBLE_EQ(h.upper, 1.0);
  EXPECT_TRUE(h.degenerate());

  EXPECT_THROW(p_window(NuFunction::constant(0.4)), DomainError);
}

TEST(PWindowProperty, LowerBelowUpperForTwoSupportPoints) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto n = fixtures::random_nu(rng, 1.0);
    if (!support_count_at_least_two(n.measure())) continue;
    const auto w = p_window(n);
    EXPECT_GE(w.lower, 1.0);
    EXPECT_LT(w.lower, w.upper);
  }
}

TEST(LineNorm, Examples) {
  auto inv = [](cplx z) { return -1.0 / z; };
  const auto a = line_p_norm(inv, 2.0, 1.0);
  ASSERT_TRUE(a.converged);
  EXPECT_NEAR(a.value, kPi, 1e-8 * kPi);
  const auto b = line_p_norm(inv, 2.0, 2.0);
  ASSERT_TRUE(b.converged);
  EXPECT_NEAR(b.value, kPi / 2.0, 1e-8 * kPi);
  for (double p : {0.5, 1.0, 3.0}) {
    const auto c = line_p_norm([](cplx) { return cplx(1.0); }, p, 1.0);
    EXPECT_FALSE(c.converged);
    EXPECT_TRUE(c.diverging);
  }
  EXPECT_THROW(line_p_norm(inv, 0.0, 1.0), DomainError);
  EXPECT_THROW(line_p_norm(inv, 1.0, 0.0), DomainError);
}

TEST(LineNorm, TwoAtomMatchesSinhSinhOracle) {
  boost::math::quadrature::sinh_sinh<double> ss;
  for (double p : {1.2, 1.5, 1.9}) {
    for (double y : {0.5, 1.0, 2.0}) {
      auto g = [p, y](double x) { return std::pow(std::abs(two_atom_phi(cplx(x, y))), p); };
      const double oracle = ss.integrate(g, 1e-12);
      const auto n = line_p_norm([](cplx z) { return eval_phi(kTwoAtom, z); }, p, y, atom_hints());
      ASSERT_TRUE(n.converged) << p << " " << y;
      EXPECT_NEAR(n.value, oracle, 1e-7 * oracle) << p << " " << y;
    }
  }
}

TEST(LineNorm, BelowWindowGrowsLikeSqrtOfRadius) {
  // |phi| ~ sqrt(2)/|x| at infinity, so each doubling of the radius adds
  // sqrt(2) times the previous band for p = 0.5.
  const auto n = line_p_norm([](cplx z) { return eval_phi(kTwoAtom, z); }, 0.5, 0.1, atom_hints());
  EXPECT_FALSE(n.converged);
  EXPECT_TRUE(n.diverging);
  const auto& s = n.partials;
  ASSERT_GE(s.size(), 4u);
  const double ratio = (s.back() - s[s.size() - 2]) / (s[s.size() - 2] - s[s.size() - 3]);
  EXPECT_NEAR(ratio, std::sqrt(2.0), 0.02);
}

TEST(Refinement, AboveWindowGrowsTowardsAxis) {
  // Near an atom of mass 1/2, |phi|^p ~ |x - a|^(-p/2); the line norm grows
  // like y^(1 - p/2) and successive increments approach the ratio 2^(p/2 - 1).
  auto phi = [](cplx z) { return eval_phi(kTwoAtom, z); };
  const auto r = near_axis_refinement(phi, 2.5, 0.1, atom_hints());
  EXPECT_TRUE(r.diverging);
  ASSERT_GE(r.values.size(), 4u);
  const auto& v = r.values;
  const double ratio = (v.back() - v[v.size() - 2]) / (v[v.size() - 2] - v[v.size() - 3]);
  EXPECT_NEAR(ratio, std::pow(2.0, 0.25), 0.02);

  const auto in = near_axis_refinement(phi, 1.5, 0.1, atom_hints());
  EXPECT_FALSE(in.diverging);
  for (std::size_t k = 1; k < in.values.size(); ++k) EXPECT_GT(in.values[k], in.values[k - 1]);
}

TEST(WeightedDiagnostic, FiresAboveReciprocalMass) {
  auto phi = [](cplx z) { return eval_phi(kTwoAtom, z); };
  for (double y : {0.1, 1.0}) {
    const auto above = weighted_diagnostic(phi, 1.5, y, atom_hints());
    EXPECT_FALSE(above.converged);
    EXPECT_TRUE(above.diverging);
    // |phi|^-p/(1 + x^2) ~ 2^(-p/2) |x|^(p - 2): converges for p < 1.
    const auto below = weighted_diagnostic(phi, 0.5, y, atom_hints());
    EXPECT_TRUE(below.converged);
  }
}

TEST(BoundaryNorm, TwoAtomMatchesBetaFunctionForm) {
  // |phi(x)|^p = 2^a |1 - x^2|^-a with a = p/2:
  // int_-1^1 = B(1/2, 1 - a) and 2 int_1^inf = B(1 - a, a - 1/2).
  for (double p : {1.2, 1.5, 1.9}) {
    const double a = p / 2.0;
    const double oracle = std::pow(2.0, a) * (std::beta(0.5, 1.0 - a) + std::beta(1.0 - a, a - 0.5));
    const auto b = boundary_p_norm(kTwoAtom, p, atom_hints());
    ASSERT_TRUE(b.converged) << b.failure;
    EXPECT_NEAR(b.value, oracle, 1e-7 * oracle) << p;
  }
}

TEST(WindowSweep, TwoAtomExamples) {
  const auto s = window_sweep(kTwoAtom, {1.5, 2.5}, {1.0, 0.1, 0.5}, atom_hints());
  ASSERT_EQ(s.entries.size(), 6u);
  for (std::size_t k = 1; k < s.entries.size(); ++k) EXPECT_LE(s.entries[k - 1].y, s.entries[k].y);
  std::vector<double> inside;
  for (const auto& e : s.entries) {
    if (e.p == 1.5) {
      EXPECT_TRUE(e.converged) << e.y << " " << e.failure;
      EXPECT_GT(e.value, 0.0);
      inside.push_back(e.value);
    }
    if (e.p == 2.5 && e.y == 0.1) {
      EXPECT_FALSE(e.converged);
      EXPECT_TRUE(e.refinement_diverging);
    }
  }
  ASSERT_EQ(inside.size(), 3u);
  EXPECT_GT(inside[0], inside[1]);
  EXPECT_GT(inside[1], inside[2]);
}

TEST(WindowSweep, EdgeConsistency) {
  const auto s = window_sweep(kTwoAtom, {1.9, 2.1}, {0.1}, atom_hints());
  ASSERT_EQ(s.entries.size(), 2u);
  EXPECT_TRUE(s.entries[0].converged);
  EXPECT_FALSE(s.entries[1].converged);
}

TEST(WindowSweep, BelowWindowDoesNotConverge) {
  const auto s = window_sweep(kTwoAtom, {0.5}, {0.1}, atom_hints());
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_FALSE(s.entries[0].converged);
  EXPECT_TRUE(s.entries[0].radius_diverging);
}

TEST(WindowSweep, ExceptionalIsRejected) {
  EXPECT_THROW(window_sweep({{0.0, NuFunction::heaviside(0.0)}}, {1.5}, {1.0}), DomainError);
  EXPECT_THROW(window_sweep(kTwoAtom, {-1.0}, {1.0}), DomainError);
}

TEST(HardyProperty, MonotoneInYAndBoundaryDominance) {
  for (std::uint64_t seed = 60; seed < 63; ++seed) {
    const auto P = random_member(seed);
    if (detect_exceptional(P.log_part.nu)) continue;
    const double p = inner_p(p_window(P.log_part.nu));
    const std::vector<double> ys{0.25, 0.5, 1.0};
    LineSpec spec;
    spec.hints = P.log_part.nu.measure().breakpoints();
    std::vector<double> values;
    for (double y : ys) {
      const auto n = line_p_norm([&P](cplx z) { return eval_phi(P, z); }, p, y, spec);
      ASSERT_TRUE(n.converged) << "seed " << seed << " y " << y << " " << n.failure;
      values.push_back(n.value);
    }
    for (std::size_t k = 1; k < values.size(); ++k) {
      EXPECT_LT(values[k], values[k - 1] * (1.0 - 1e-10)) << "seed " << seed;
    }
    const auto b = boundary_p_norm(P, p, spec);
    ASSERT_TRUE(b.converged) << "seed " << seed << " " << b.failure;
    for (double v : values) EXPECT_LE(v, b.value) << "seed " << seed;
  }
}
