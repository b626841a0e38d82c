#ifndef PICKFN_TRANSFORMS_HPP
#define PICKFN_TRANSFORMS_HPP

// Hilbert, Cauchy and Poisson transforms of boundary data, the determinant
// criterion for boundary densities and the generalised Hoelder bound.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pickfn/error.hpp"
#include "pickfn/measure.hpp"
#include "pickfn/plog.hpp"
#include "pickfn/quadrature.hpp"

namespace pickfn {

// A non-negative function v on the real line. v vanishes outside [lo, hi];
// `breakpoints` lists discontinuities and integrable singularities. An
// optional evaluator near(c, d) = v(c + d) stays accurate for d far below the
// resolution of c, which quadrature needs at singular breakpoints.
class BoundaryDensity {
 public:
  enum class Decay { compact, exponential, power };
  using Near = std::function<double(double, double)>;

  BoundaryDensity() : BoundaryDensity([](double) { return 0.0; }, 0.0, 0.0, Decay::compact) {}

  BoundaryDensity(std::function<double(double)> v, double lo, double hi, Decay decay,
                  std::vector<double> breakpoints = {}, double power_exponent = 0.0, Near near = {})
      : v_(std::move(v)), near_(std::move(near)), lo_(lo), hi_(hi), decay_(decay), power_(power_exponent) {
    if (!(lo <= hi)) throw DomainError("boundary density support must satisfy lo <= hi");
    if (decay == Decay::compact && !(std::isfinite(lo) && std::isfinite(hi))) {
      throw DomainError("compact boundary density needs a finite support");
    }
    if (decay == Decay::power && !(power_exponent > 0.0)) {
      throw DomainError("power decay needs a positive exponent");
    }
    for (double b : breakpoints) {
      if (std::isfinite(b) && b > lo && b < hi) cuts_.push_back(b);
    }
    std::sort(cuts_.begin(), cuts_.end());
    cuts_.erase(std::unique(cuts_.begin(), cuts_.end()), cuts_.end());
  }

  // height on [a, b].
  static BoundaryDensity box(double a, double b, double height = 1.0) {
    if (!(height >= 0.0)) throw DomainError("box height must be non-negative");
    return {[a, b, height](double t) { return (t >= a && t <= b) ? height : 0.0; }, a, b,
            Decay::compact};
  }

  // Imaginary boundary part of exp(f) for the log-Pick data (beta, nu).
  static BoundaryDensity from_nu(const NuFunction& n, double beta, const quad::Tolerance& tol = {}) {
    if (!n.measure().support_has_two_points()) {
      throw DomainError("exceptional class, boundary density formula inapplicable");
    }
    const auto [slo, shi] = n.measure().support_hull();
    const double lo = n.baseline() == 0.0 ? slo : -kInf;
    const double hi = n.at_infinity() >= 1.0 ? shi : kInf;
    const bool compact = std::isfinite(lo) && std::isfinite(hi);
    auto near = [n, beta, tol](double c, double d) {
      // An atom itself is a single point of infinite density and carries no weight.
      if (d == 0.0 && n.measure().is_atom(c)) return 0.0;
      return v_from_nu_near(n, beta, c, d, tol);
    };
    return {[near](double x) { return near(x, 0.0); },
            lo,
            hi,
            compact ? Decay::compact : Decay::power,
            n.measure().breakpoints(),
            compact ? 0.0 : n.measure().total_mass(),
            near};
  }

  double operator()(double t) const { return (t < lo_ || t > hi_) ? 0.0 : v_(t); }

  double near(double c, double d) const {
    const double x = c + d;
    if (x < lo_ || x > hi_ || (x == lo_ && d < 0.0) || (x == hi_ && d > 0.0)) return 0.0;
    return near_ ? near_(c, d) : v_(x);
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Decay decay() const { return decay_; }
  double power_exponent() const { return power_; }
  const std::vector<double>& breakpoints() const { return cuts_; }
  bool is_zero() const { return lo_ == hi_; }

  // Support ends and interior breakpoints.
  std::vector<double> all_cuts() const {
    std::vector<double> c;
    if (std::isfinite(lo_)) c.push_back(lo_);
    c.insert(c.end(), cuts_.begin(), cuts_.end());
    if (std::isfinite(hi_)) c.push_back(hi_);
    return c;
  }

 private:
  std::function<double(double)> v_;
  Near near_;
  double lo_, hi_;
  Decay decay_;
  double power_;
  std::vector<double> cuts_;
};

struct PVQuadSpec {
  double eps0 = 1e-2;  // first excision half-width
  int halvings = 12;   // maximal number of halvings of the excision
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double radius_cap = 1048576.0;  // truncation radius cap for non-compact v

  quad::Tolerance tolerance() const { return {abs_tol, rel_tol}; }
  quad::DoublingPolicy doubling() const {
    quad::DoublingPolicy p;
    p.abs_tol = abs_tol;
    p.rel_tol = rel_tol;
    p.radius_cap = radius_cap;
    return p;
  }
};

namespace detail {

// Integral over [a, b] of v(s) k(s - x), split at the cuts of v and at
// `extra`. Each piece runs tanh-sinh on [-1, 1] with the exact distance to the
// nearer end, so both v (through near) and the offset s - x keep full
// precision next to singular breakpoints and next to x.
template <class K>
double integrate_density(const BoundaryDensity& v, K&& k, double a, double b, double x,
                         const std::vector<double>& extra, const quad::Tolerance& tol) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts = v.all_cuts();
  cuts.insert(cuts.end(), extra.begin(), extra.end());
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> pts{a};
  for (double c : cuts) {
    if (c > pts.back() && c < b) pts.push_back(c);
  }
  pts.push_back(b);
  double sum = 0.0, error = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto r = quad::tanh_sinh_ends([&](double c, double d) { return v.near(c, d) * k(c - x + d); },
                                        pts[i], pts[i + 1], tol);
    sum += r.value;
    error += r.error;
    l1 += r.l1;
  }
  quad::detail::check("tanh_sinh", error, l1, tol);
  return sum;
}

// Integral over the whole line of v(s) k(s - x); unbounded support is
// truncated at radii doubling up to the cap.
template <class K>
double integrate_line(const BoundaryDensity& v, K&& k, double x, const std::vector<double>& extra,
                      const PVQuadSpec& q) {
  if (v.is_zero()) return 0.0;
  const auto tol = q.tolerance();
  double reach = 1.0 + std::abs(x);
  for (double c : v.all_cuts()) reach = std::max(reach, std::abs(c));
  for (double c : extra) reach = std::max(reach, std::abs(c));
  const double a = std::isfinite(v.lo()) ? v.lo() : -2.0 * reach;
  const double b = std::isfinite(v.hi()) ? v.hi() : 2.0 * reach;
  double sum = integrate_density(v, k, a, b, x, extra, tol);
  auto tail = [&](double r0, int side) {
    auto band = [&](double r1, double r2) {
      return side > 0 ? integrate_density(v, k, r1, r2, x, {}, tol)
                      : integrate_density(v, k, -r2, -r1, x, {}, tol);
    };
    const auto r = quad::sum_doubling(band, 0.0, r0, q.doubling());
    if (!r.converged) {
      const auto& p = r.partials;
      throw ConvergenceError("truncation radius cap reached",
                             p.size() > 1 ? std::abs(p.back() - p[p.size() - 2]) : kInf);
    }
    return r.value;
  };
  if (!std::isfinite(v.hi())) sum += tail(b, 1);
  if (!std::isfinite(v.lo())) sum += tail(-a, -1);
  return sum;
}

}  // namespace detail

// (1/pi) P int v(t)/(t - x) dt = (1/pi) lim int_eps^inf (v(x + t) - v(x - t))/t dt.
inline double hilbert_pv(const BoundaryDensity& v, double x, const PVQuadSpec& q = {}) {
  if (!std::isfinite(x)) throw DomainError("hilbert_pv: x must be finite");
  if (v.is_zero()) return 0.0;
  const auto tol = q.tolerance();
  // Outer part: |s - x| >= eps0.
  auto outer_kernel = [&](double t) { return std::abs(t) >= q.eps0 ? 1.0 / t : 0.0; };
  const double outer = detail::integrate_line(v, outer_kernel, x, {x - q.eps0, x + q.eps0}, q);

  // Inner bands eps/2 <= |s - x| <= eps, summed with geometric extrapolation in 1/eps.
  auto kernel = [](double t) { return 1.0 / t; };
  auto band = [&](double r1, double r2) {
    const double lo = 1.0 / r2, hi = 1.0 / r1;
    return detail::integrate_density(v, kernel, x + lo, x + hi, x, {}, tol) +
           detail::integrate_density(v, kernel, x - hi, x - lo, x, {}, tol);
  };
  quad::DoublingPolicy policy = q.doubling();
  policy.radius_cap = std::ldexp(1.0 / q.eps0, q.halvings);
  const auto r = quad::sum_doubling(band, 0.0, 1.0 / q.eps0, policy);
  if (!r.converged) {
    const auto& p = r.partials;
    const double last = p.back(), before = p.size() > 1 ? p[p.size() - 2] : 0.0;
    throw ConvergenceError("hilbert_pv did not converge: last iterates " + std::to_string(before) +
                               ", " + std::to_string(last),
                           std::abs(last - before));
  }
  return (outer + r.value) / kPi;
}

// (1/pi) int v(t)/(t - z) dt for Im z > 0.
inline cplx cauchy_halfplane(const BoundaryDensity& v, cplx z, const PVQuadSpec& q = {}) {
  detail::require_upper(z, "cauchy_halfplane");
  if (v.is_zero()) return 0.0;
  const double x = z.real(), y = z.imag();
  const std::vector<double> peaks{x - 10.0 * y, x - y, x, x + y, x + 10.0 * y};
  // 1/(t - iy) with t = s - x.
  const double re = detail::integrate_line(v, [y](double t) { return t / (t * t + y * y); }, x, peaks, q);
  const double im = detail::integrate_line(v, [y](double t) { return y / (t * t + y * y); }, x, peaks, q);
  return cplx(re, im) / kPi;
}

// (1/pi) int v(t)/(t - z) dt for z off the support of v: Im z != 0, or z real
// outside [lo, hi].
inline cplx cauchy_transform(const BoundaryDensity& v, cplx z, const PVQuadSpec& q = {}) {
  if (z.imag() > 0.0) return cauchy_halfplane(v, z, q);
  if (z.imag() < 0.0) return std::conj(cauchy_halfplane(v, std::conj(z), q));
  const double x = z.real();
  if (!std::isfinite(x) || (x >= v.lo() && x <= v.hi() && !v.is_zero())) {
    throw DomainError("cauchy_transform: real z must lie outside the support of v");
  }
  return detail::integrate_line(v, [](double t) { return 1.0 / t; }, x, {}, q) / kPi;
}

// (1/pi) int v(t)/(t - z)^2 dt, the derivative of cauchy_transform.
inline cplx cauchy_transform_derivative(const BoundaryDensity& v, cplx z, const PVQuadSpec& q = {}) {
  if (z.imag() < 0.0) return std::conj(cauchy_transform_derivative(v, std::conj(z), q));
  if (v.is_zero()) return 0.0;
  const double x = z.real(), y = z.imag();
  if (y == 0.0) {
    if (!std::isfinite(x) || (x >= v.lo() && x <= v.hi())) {
      throw DomainError("cauchy_transform_derivative: real z must lie outside the support of v");
    }
    return detail::integrate_line(v, [](double t) { return 1.0 / (t * t); }, x, {}, q) / kPi;
  }
  const std::vector<double> peaks{x - 10.0 * y, x - y, x, x + y, x + 10.0 * y};
  // 1/(t - iy)^2 = (t^2 - y^2 + 2ity)/(t^2 + y^2)^2 with t = s - x.
  auto den = [y](double t) { return (t * t + y * y) * (t * t + y * y); };
  const double re = detail::integrate_line(v, [&](double t) { return (t * t - y * y) / den(t); }, x, peaks, q);
  const double im = detail::integrate_line(v, [&](double t) { return 2.0 * t * y / den(t); }, x, peaks, q);
  return cplx(re, im) / kPi;
}

// alpha y + int y/(y^2 + (x - t)^2) nu(t) dt, integrating against nu(t) dt;
// independent of the dnu route used by harmonic_parts.
inline double poisson_V(const NuFunction& n, double alpha, double x, double y, const quad::Tolerance& tol = {}) {
  if (!(y > 0.0)) throw DomainError("poisson_V: requires y > 0");
  auto g = [x, y](double t) { return y / (y * y + (t - x) * (t - x)); };
  auto anti = [x, y](double t) {
    if (t == kInf) return kPi / 2.0;
    if (t == -kInf) return -kPi / 2.0;
    return std::atan((t - x) / y);
  };
  return alpha * y + integrate_times_nu(n, g, anti, -kInf, kInf, detail::peak_hints(x, y), tol).value;
}

// pi (v~(x1) v(x2) - v~(x2) v(x1)).
inline double det_condition(const BoundaryDensity& v, double x1, double x2, const PVQuadSpec& q = {}) {
  if (x1 > x2) throw DomainError("det_condition: requires x1 <= x2");
  const double h1 = hilbert_pv(v, x1, q);
  const double h2 = x1 == x2 ? h1 : hilbert_pv(v, x2, q);
  return kPi * (h1 * v(x2) - h2 * v(x1));
}

struct HolderResult {
  double lhs = 0.0;
  double d_psi = 0.0;  // sup over the t-sample; a lower bound of the true sup
  std::size_t t_samples = 0;
};

// lhs = int_Q exp(int_Omega log psi(x, t) drho(t)) domega(x) and
// d_psi = sup_t int_Q psi(x, t)^rho(Omega) domega(x). Omega is the support of
// rho: its atoms plus a 64-point sample of each density piece.
inline HolderResult holder_bound_check(const std::function<double(double, double)>& psi,
                                       const StieltjesMeasure& rho, const StieltjesMeasure& omega,
                                       const quad::Tolerance& tol = {}) {
  const double r = rho.total_mass();
  if (!(r > 0.0 && r < 1.0)) throw DomainError("holder_bound_check: requires 0 < rho(Omega) < 1");
  const double w = omega.total_mass();
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("holder_bound_check: requires 0 < omega(Q) < inf");

  std::vector<double> ts;
  for (const auto& a : rho.atoms()) ts.push_back(a.location);
  for (const auto& p : rho.pieces()) {
    if (p.is_tail()) throw DomainError("holder_bound_check: rho pieces must be bounded");
    for (int k = 0; k < 64; ++k) ts.push_back(p.lo() + (p.hi() - p.lo()) * (k + 0.5) / 64.0);
  }
  std::vector<double> xs;
  for (const auto& a : omega.atoms()) xs.push_back(a.location);
  for (const auto& p : omega.pieces()) {
    if (p.is_tail()) continue;
    for (int k = 0; k < 16; ++k) xs.push_back(p.lo() + (p.hi() - p.lo()) * (k + 0.5) / 16.0);
  }
  for (double x : xs) {
    double inf_t = kInf;
    for (double t : ts) inf_t = std::min(inf_t, psi(x, t));
    if (!(inf_t > 0.0)) throw DomainError("holder_bound_check: inf_t psi(x, t) must be positive");
  }

  HolderResult out;
  out.t_samples = ts.size();
  out.lhs = omega
                .integrate(
                    [&](double x) {
                      const double inner =
                          rho.integrate([&](double t) { return std::log(psi(x, t)); }, {}, tol).value;
                      return std::exp(inner);
                    },
                    {}, tol)
                .value;
  out.d_psi = 0.0;
  for (double t : ts) {
    const double s = omega.integrate([&](double x) { return std::pow(psi(x, t), r); }, {}, tol).value;
    out.d_psi = std::max(out.d_psi, s);
  }
  return out;
}

}  // namespace pickfn

#endif  // PICKFN_TRANSFORMS_HPP
