#ifndef PICKFN_PLOG_HPP
#define PICKFN_PLOG_HPP

// The classes P-int cap log P and P_log: f = beta + i pi nu(-inf) +
// int log(sqrt(1 + t^2)/(t - z)) dnu(t) with 0 <= nu <= 1, and phi = exp(f).

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pickfn/error.hpp"
#include "pickfn/measure.hpp"
#include "pickfn/pick.hpp"
#include "pickfn/quadrature.hpp"

namespace pickfn {

struct LogPickPrimitive {
  double beta = 0.0;
  NuFunction nu;

  LogPickPrimitive() = default;
  LogPickPrimitive(double b, NuFunction n) : beta(b), nu(std::move(n)) {
    if (!std::isfinite(beta)) throw DomainError("beta must be finite");
    if (!nu.bounded_by_one()) throw DomainError("log-Pick nu must satisfy 0 <= nu <= 1");
  }

  PrimitivePick as_primitive() const { return {0.0, beta, nu}; }
};

struct PLogFunction {
  LogPickPrimitive log_part;
};

inline cplx eval_f(const LogPickPrimitive& L, cplx z, const quad::Tolerance& tol = {}) {
  detail::require_upper(z, "eval_f");
  return eval_primitive(L.as_primitive(), z, tol);
}

inline cplx eval_phi(const PLogFunction& P, cplx z, const quad::Tolerance& tol = {}) {
  return std::exp(eval_f(P.log_part, z, tol));
}

// beta + int log(sqrt(1 + t^2)/|x - t|) dnu(t): log |phi| on the boundary.
inline double boundary_log_modulus(const LogPickPrimitive& L, double x, const quad::Tolerance& tol = {}) {
  return boundary_U(L.as_primitive(), x, tol);
}

inline cplx boundary_phi(const PLogFunction& P, double x, const quad::Tolerance& tol = {}) {
  const double m = boundary_log_modulus(P.log_part, x, tol);
  return std::exp(cplx(m, kPi * P.log_part.nu.cdf(x)));
}

// Support of at most one point: f = beta + i pi theta1 (1 - theta) + theta log(sqrt(1 + a^2)/(a - z)).
struct ExceptionalParams {
  double theta = 0.0;
  double theta1 = 0.0;
  double a = std::numeric_limits<double>::quiet_NaN();  // NaN when theta = 0
  double beta = 0.0;

  bool has_point() const { return !std::isnan(a); }
};

inline std::optional<ExceptionalParams> detect_exceptional(const NuFunction& n, double beta = 0.0) {
  const auto& m = n.measure();
  if (m.support_has_two_points()) return std::nullopt;
  ExceptionalParams e;
  e.beta = beta;
  if (m.atoms().size() == 1) {
    e.theta = m.atoms().front().mass;
    e.a = m.atoms().front().location;
  }
  e.theta1 = e.theta < 1.0 ? n.baseline() / (1.0 - e.theta) : 0.0;
  return e;
}

// exp(beta + i pi theta1 (1 - theta)) / (a - z)^theta with the principal power.
inline cplx eval_exceptional(const ExceptionalParams& e, cplx z) {
  const cplx c = std::exp(cplx(e.beta, kPi * e.theta1 * (1.0 - e.theta)));
  if (e.theta == 0.0) return c;
  return c * std::exp(-e.theta * std::log(e.a - z));
}

// log |phi| on the boundary at x = c + d with the distance to an atom at c
// taken as |d|, so the value stays accurate when d is below the resolution of c.
inline double boundary_log_modulus_near(const NuFunction& n, double beta, double c, double d,
                                        const quad::Tolerance& tol = {}) {
  const auto& m = n.measure();
  const double x = c + d;
  if ((x == c && d == 0.0 && m.is_atom(c)) || (x != c && m.is_atom(x))) {
    throw DomainError("boundary singularity at atom");
  }
  double log_mod = beta;
  for (const auto& a : m.atoms()) {
    const double dist = a.location == c ? std::abs(d) : std::abs(a.location - x);
    log_mod += a.mass * (0.5 * std::log1p(a.location * a.location) - std::log(dist));
  }
  IntegrationHints hints;
  hints.singular = x;
  for (const auto& p : m.pieces()) {
    auto f = [&p, x](double t) {
      if (t == x) return 0.0;
      return (0.5 * std::log1p(t * t) - std::log(std::abs(t - x))) * p.density(t);
    };
    log_mod += StieltjesMeasure::integrate_piece(f, p.lo(), p.hi(), hints, tol).value;
  }
  return log_mod;
}

// Imaginary part of the boundary value of phi at x = c + d; the jump of nu at
// c is resolved by the sign of d.
inline double v_from_nu_near(const NuFunction& n, double beta, double c, double d,
                             const quad::Tolerance& tol = {}) {
  const auto& m = n.measure();
  if (!m.support_has_two_points()) throw DomainError("exceptional class, boundary density formula inapplicable");
  const double x = c + d;
  double nu;
  if (x == c) {
    if (d == 0.0 && m.is_atom(c)) throw DomainError("boundary singularity at atom");
    nu = n.cdf(c) + (d > 0.0 ? 0.5 : (d < 0.0 ? -0.5 : 0.0)) * m.mass_at(c);
  } else {
    if (m.is_atom(x)) throw DomainError("boundary singularity at atom");
    nu = n.cdf(x);
  }
  if (nu <= 0.0 || nu >= 1.0) return 0.0;
  return std::sin(kPi * nu) * std::exp(boundary_log_modulus_near(n, beta, c, d, tol));
}

inline double v_from_nu(const NuFunction& n, double beta, double x, const quad::Tolerance& tol = {}) {
  return v_from_nu_near(n, beta, x, 0.0, tol);
}

struct GridSpec {
  std::vector<double> xs;
  std::vector<double> ys;

  // x = +-10^s for 8 values of s in [-2, 1], plus the given extra points;
  // y in {0.05, 0.1, 0.5, 1, 5}.
  static GridSpec standard(const std::vector<double>& extra_x = {}) {
    GridSpec g;
    for (int k = 0; k < 8; ++k) {
      const double r = std::pow(10.0, -2.0 + 3.0 * k / 7.0);
      g.xs.push_back(r);
      g.xs.push_back(-r);
    }
    g.xs.insert(g.xs.end(), extra_x.begin(), extra_x.end());
    std::sort(g.xs.begin(), g.xs.end());
    g.xs.erase(std::unique(g.xs.begin(), g.xs.end()), g.xs.end());
    g.ys = {0.05, 0.1, 0.5, 1.0, 5.0};
    return g;
  }
};

// Points just left and right of every breakpoint of nu, for GridSpec::standard.
inline std::vector<double> support_adjacent_points(const NuFunction& n, double offset = 0.05) {
  std::vector<double> out;
  for (double b : n.measure().breakpoints()) {
    out.push_back(b - offset);
    out.push_back(b + offset);
  }
  return out;
}

struct CriterionVerdict {
  bool pass = true;
  double worst = 0.0;  // largest violation magnitude found (0 when none)
  double x = std::numeric_limits<double>::quiet_NaN();
  double x2 = std::numeric_limits<double>::quiet_NaN();  // second point for pair criteria
  double y = std::numeric_limits<double>::quiet_NaN();
  double y2 = std::numeric_limits<double>::quiet_NaN();
};

struct MembershipReport {
  enum class Overall { member, non_member, inconclusive };

  // Index k holds condition k + 1 of the characterisation.
  std::array<CriterionVerdict, 4> criteria;
  bool pick_range = true;  // Im phi >= -tolerance on the grid
  double worst_negative_imag = 0.0;
  Overall overall = Overall::member;
  std::string failure;  // location of an evaluation failure
  std::size_t points_evaluated = 0;

  bool all_pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
  }
};

inline const char* to_string(MembershipReport::Overall o) {
  switch (o) {
    case MembershipReport::Overall::member: return "member";
    case MembershipReport::Overall::non_member: return "non-member";
    default: return "inconclusive";
  }
}

namespace detail {

inline void record(CriterionVerdict& c, double violation, double threshold, double x, double x2,
                   double y, double y2) {
  if (violation <= threshold) return;
  c.pass = false;
  if (violation > c.worst) {
    c.worst = violation;
    c.x = x;
    c.x2 = x2;
    c.y = y;
    c.y2 = y2;
  }
}

// Runs job(k) for k in [0, count) on a small pool; job must not throw.
template <class Job>
void parallel_for(std::size_t count, Job&& job) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t k = next++; k < count; k = next++) job(k);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Grid test of the four equivalent characterisations of P_log for a Pick
// function phi. A grid can refute membership; "member" means no violation was
// found on this grid.
inline MembershipReport membership_test(const std::function<cplx(cplx)>& phi, const GridSpec& grid,
                                        double threshold = 1e-9) {
  if (grid.xs.size() < 2 || grid.ys.size() < 2) throw DomainError("grid needs >= 2 x and >= 2 y values");
  std::vector<double> xs = grid.xs, ys = grid.ys;
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const std::size_t nx = xs.size(), ny = ys.size();

  // Per point: phi at y, y - h, y + h with h = 1e-4 y.
  struct Sample {
    cplx mid, lo, hi;
    bool ok = true;
    std::string error;
  };
  std::vector<Sample> s(nx * ny);
  detail::parallel_for(nx * ny, [&](std::size_t k) {
    const double x = xs[k % nx], y = ys[k / nx], h = 1e-4 * y;
    Sample& p = s[k];
    try {
      p.mid = phi(cplx(x, y));
      p.lo = phi(cplx(x, y - h));
      p.hi = phi(cplx(x, y + h));
      const bool finite = std::isfinite(p.mid.real()) && std::isfinite(p.mid.imag()) &&
                          std::isfinite(p.lo.real()) && std::isfinite(p.lo.imag()) &&
                          std::isfinite(p.hi.real()) && std::isfinite(p.hi.imag());
      if (!finite) {
        p.ok = false;
        p.error = "non-finite value";
      }
    } catch (const std::exception& e) {
      p.ok = false;
      p.error = e.what();
    }
  });
  auto at = [&](std::size_t i, std::size_t j) -> const Sample& { return s[j * nx + i]; };

  MembershipReport r;
  r.points_evaluated = 3 * nx * ny;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (!at(i, j).ok) {
        r.overall = MembershipReport::Overall::inconclusive;
        r.failure = "evaluation failed at " + std::to_string(xs[i]) + "+" + std::to_string(ys[j]) +
                    "i: " + at(i, j).error;
        return r;
      }
      r.worst_negative_imag = std::min(r.worst_negative_imag, at(i, j).mid.imag());
    }
  }
  r.pick_range = r.worst_negative_imag >= -threshold;

  // (1) |phi| strictly decreasing in y.
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const double d = std::abs(at(i, j + 1).mid) - std::abs(at(i, j).mid);
      detail::record(r.criteria[0], d, threshold, xs[i], xs[i], ys[j], ys[j + 1]);
    }
  }
  // (2) continuous argument strictly increasing in x along each row.
  for (std::size_t j = 0; j < ny; ++j) {
    double prev = std::arg(at(0, j).mid);
    for (std::size_t i = 1; i < nx; ++i) {
      double a = std::arg(at(i, j).mid);
      while (a - prev > kPi) a -= 2.0 * kPi;
      while (a - prev < -kPi) a += 2.0 * kPi;
      detail::record(r.criteria[1], prev - a, threshold, xs[i - 1], xs[i], ys[j], ys[j]);
      prev = a;
    }
  }
  // (3) U(x1)V(x2) - U(x2)V(x1) > 0 for every pair x1 < x2 in a row.
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i1 = 0; i1 < nx; ++i1) {
      for (std::size_t i2 = i1 + 1; i2 < nx; ++i2) {
        const cplx a = at(i1, j).mid, b = at(i2, j).mid;
        const double det = a.real() * b.imag() - b.real() * a.imag();
        detail::record(r.criteria[2], -det, threshold, xs[i1], xs[i2], ys[j], ys[j]);
      }
    }
  }
  // (4) U U_y + V V_y < 0 by central differences.
  for (std::size_t j = 0; j < ny; ++j) {
    const double h = 1e-4 * ys[j];
    for (std::size_t i = 0; i < nx; ++i) {
      const Sample& p = at(i, j);
      const cplx dy = (p.hi - p.lo) / (2.0 * h);
      const double g = p.mid.real() * dy.real() + p.mid.imag() * dy.imag();
      detail::record(r.criteria[3], g, threshold, xs[i], xs[i], ys[j], ys[j]);
    }
  }
  r.overall = (r.pick_range && r.all_pass()) ? MembershipReport::Overall::member
                                             : MembershipReport::Overall::non_member;
  return r;
}

// Default grid with points next to the support of nu.
inline MembershipReport membership_test(const PLogFunction& P, const quad::Tolerance& tol = {}) {
  const auto grid = GridSpec::standard(support_adjacent_points(P.log_part.nu));
  return membership_test([&P, tol](cplx z) { return eval_phi(P, z, tol); }, grid);
}

}  // namespace pickfn

#endif  // PICKFN_PLOG_HPP
