#ifndef PICKFN_QUADRATURE_HPP
#define PICKFN_QUADRATURE_HPP

// Thin layer over Boost.Math quadrature. Every integrator here returns the
// value together with its error estimate and throws ConvergenceError when the
// estimate exceeds the requested tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pickfn/error.hpp"

namespace pickfn {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace quad {

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-8;

  // Target handed to the adaptive refinement. Kept well below the accepted
  // error so that results comfortably meet the contract.
  double target() const { return std::max(1e-15, rel * 1e-4); }
  double accepted(double scale) const { return std::max(abs, rel * scale); }
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  double l1 = 0.0;  // integral of |f|, when the backend reports it
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }

inline void check(const char* who, double error, double l1, const Tolerance& tol) {
  if (!(error <= tol.accepted(l1))) {
    throw ConvergenceError(std::string(who) + " did not converge", error);
  }
}

inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_engine() {
  thread_local boost::math::quadrature::tanh_sinh<double> engine(15);
  return engine;
}

inline boost::math::quadrature::exp_sinh<double>& exp_sinh_engine() {
  thread_local boost::math::quadrature::exp_sinh<double> engine(12);
  return engine;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (G15/K31 rule) on a finite interval: the
// segment with the largest error estimate is bisected until the summed
// estimate meets the target or the segment budget runs out.
template <class F>
auto gauss_kronrod(F&& f, double a, double b, const Tolerance& tol = {},
                   std::size_t max_segments = 4000)
    -> Result<std::decay_t<decltype(f(0.0))>> {
  using T = std::decay_t<decltype(f(0.0))>;
  if (!(b > a)) return {T{}, 0.0};
  using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Segment {
    double a, b;
    T value;
    double error, l1;
  };
  auto apply = [&f](double lo, double hi) {
    double err = 0.0, l1 = 0.0;
    T v = rule::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    return Segment{lo, hi, v, err, l1};
  };
  auto by_error = [](const Segment& x, const Segment& y) { return x.error < y.error; };
  std::vector<Segment> heap{apply(a, b)};
  T value = heap.front().value;
  double error = heap.front().error;
  double l1 = heap.front().l1;
  while (error > std::max(tol.abs * 1e-3, tol.target() * l1) && heap.size() < max_segments) {
    std::pop_heap(heap.begin(), heap.end(), by_error);
    Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    Segment left = apply(worst.a, mid), right = apply(mid, worst.b);
    value += left.value + right.value - worst.value;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    // Recompute the sum of estimates from scratch; incremental updates drift.
    error = 0.0;
    for (const auto& s : heap) error += s.error;
  }
  detail::check("gauss_kronrod", error, l1, tol);
  return {value, error};
}

// Gauss-Kronrod over [a, b] split at every hint that falls strictly inside.
template <class F>
auto integrate(F&& f, double a, double b, std::vector<double> hints,
               const Tolerance& tol = {})
    -> Result<std::decay_t<decltype(f(0.0))>> {
  using T = std::decay_t<decltype(f(0.0))>;
  std::vector<double> cuts{a};
  std::sort(hints.begin(), hints.end());
  for (double h : hints) {
    if (h > a && h < b && h > cuts.back()) cuts.push_back(h);
  }
  cuts.push_back(b);
  Result<T> total;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    auto part = gauss_kronrod(f, cuts[k], cuts[k + 1], tol);
    total.value += part.value;
    total.error += part.error;
  }
  return total;
}

// Tanh-sinh on [p, q] for an integrand given as g(c, d) = f(c + d), where c is
// the nearer end. d is exact even where c + d rounds to c, which keeps
// endpoint singularities resolved below the spacing of doubles at c.
template <class G>
auto tanh_sinh_ends(G&& g, double p, double q, const Tolerance& tol = {})
    -> Result<std::decay_t<decltype(g(0.0, 0.0))>> {
  using T = std::decay_t<decltype(g(0.0, 0.0))>;
  if (!(q > p)) return {T{}, 0.0, 0.0};
  const double half = 0.5 * (q - p);
  // uc > 0: distance uc to +1; uc < 0: distance -uc to -1.
  auto u = [&](double, double uc) { return uc < 0.0 ? g(p, -uc * half) : g(q, -uc * half); };
  double error = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const T value = detail::tanh_sinh_engine().integrate(u, tol.target(), &error, &l1, &levels);
  return {half * value, half * error, half * l1};
}

// Tanh-sinh on a finite interval without the acceptance check, for callers
// that judge the error of a sum of pieces against the sum of their L1 norms.
// Runs on [-1, 1] with abscissae placed from the endpoint complements; the
// library's own finite-interval map can round abscissae onto an endpoint.
template <class F>
auto tanh_sinh_unchecked(F&& f, double a, double b, const Tolerance& tol = {})
    -> Result<std::decay_t<decltype(f(0.0))>> {
  return tanh_sinh_ends([&f](double c, double d) { return f(c + d); }, a, b, tol);
}

// Tanh-sinh on a finite interval; tolerates integrable endpoint singularities.
template <class F>
auto tanh_sinh(F&& f, double a, double b, const Tolerance& tol = {})
    -> Result<std::decay_t<decltype(f(0.0))>> {
  auto r = tanh_sinh_unchecked(f, a, b, tol);
  detail::check("tanh_sinh", r.error, r.l1, tol);
  return r;
}

// Exp-sinh on [a, +inf).
template <class F>
auto to_infinity(F&& f, double a, const Tolerance& tol = {})
    -> Result<std::decay_t<decltype(f(0.0))>> {
  using T = std::decay_t<decltype(f(0.0))>;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  T value = detail::exp_sinh_engine().integrate(f, a, kInf, tol.target(), &error, &l1, &levels);
  detail::check("exp_sinh", error, l1, tol);
  return {value, error};
}

// Outcome of a radius-doubling truncation sweep.
struct DoublingResult {
  double value = 0.0;
  bool converged = false;
  bool diverging = false;
  double radius = 0.0;
  std::vector<double> partials;  // running sum after each doubling
};

struct DoublingPolicy {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double radius_cap = 1048576.0;  // 2^20
  int growth_run = 6;             // consecutive growing increments that count as divergence
  double growth_ratio = 0.99;
};

// Shanks transform of order k of the last 2k + 1 entries of s, by Wynn's
// epsilon algorithm. Exact for a limit plus k geometric components.
inline double wynn_epsilon(const std::vector<double>& s, int order) {
  const std::size_t n = 2 * static_cast<std::size_t>(order) + 1;
  if (order < 1 || s.size() < n) return s.empty() ? 0.0 : s.back();
  std::vector<double> prev(n + 1, 0.0), cur(s.end() - static_cast<std::ptrdiff_t>(n), s.end());
  double best = cur.back();
  for (int col = 1; col <= 2 * order; ++col) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0) return col % 2 == 1 ? cur[i + 1] : best;
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (col % 2 == 0) best = cur.back();
  }
  return best;
}

// Sums band(R, 2R) for R = r0, 2 r0, ... on top of `base`.
//
// Converged: either a raw increment falls below tolerance, or the increments
// shrink steadily (ratios in (0, 0.95)) and two successive Shanks estimates of
// the partial sums agree to tolerance. Diverging: `growth_run` consecutive
// increments above tolerance, each at least `growth_ratio` times its
// predecessor.
template <class Band>
DoublingResult sum_doubling(Band&& band, double base, double r0, const DoublingPolicy& policy) {
  DoublingResult out;
  double sum = base;
  double radius = r0;
  std::vector<double> incs;
  double last_extrapolated = std::numeric_limits<double>::quiet_NaN();
  int growth = 0;
  out.partials.push_back(sum);
  while (2.0 * radius <= policy.radius_cap * (1.0 + 1e-12)) {
    const double d = band(radius, 2.0 * radius);
    sum += d;
    radius *= 2.0;
    out.partials.push_back(sum);
    const double tol = std::max(policy.abs_tol, policy.rel_tol * std::abs(sum));
    if (std::abs(d) <= tol) {
      out.value = sum;
      out.converged = true;
      out.radius = radius;
      return out;
    }
    if (!incs.empty()) {
      const double q = d / incs.back();
      growth = (std::abs(d) > tol && q >= policy.growth_ratio) ? growth + 1 : 0;
    }
    incs.push_back(d);
    if (growth + 1 >= policy.growth_run && incs.size() >= static_cast<std::size_t>(policy.growth_run)) {
      out.value = sum;
      out.diverging = true;
      out.radius = radius;
      return out;
    }
    const std::size_t n = incs.size();
    bool shrinking = n >= 3;
    for (std::size_t k = n >= 3 ? n - 2 : n; k < n; ++k) {
      const double q = incs[k] / incs[k - 1];
      shrinking = shrinking && q > 0.0 && q < 0.95;
    }
    if (!shrinking) {
      last_extrapolated = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const int order = static_cast<int>(std::min<std::size_t>(3, (out.partials.size() - 1) / 2));
    const double extrapolated = wynn_epsilon(out.partials, order);
    if (std::isfinite(last_extrapolated) &&
        std::abs(extrapolated - last_extrapolated) <=
            std::max(policy.abs_tol, policy.rel_tol * std::abs(extrapolated))) {
      out.value = extrapolated;
      out.converged = true;
      out.radius = radius;
      return out;
    }
    last_extrapolated = extrapolated;
  }
  out.value = sum;
  out.radius = radius;
  return out;
}

}  // namespace quad
}  // namespace pickfn

#endif  // PICKFN_QUADRATURE_HPP
