#ifndef PICKFN_HARDY_HPP
#define PICKFN_HARDY_HPP

// Hardy p-norms of P_log functions on horizontal lines, the integrability
// window 1/nu(R) < p < 1/J_nu(R), and divergence diagnostics outside it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "pickfn/error.hpp"
#include "pickfn/measure.hpp"
#include "pickfn/plog.hpp"
#include "pickfn/quadrature.hpp"

namespace pickfn {

struct PWindow {
  double lower = 1.0;   // 1/nu(R)
  double upper = kInf;  // 1/J_nu(R); +inf without atoms

  bool contains(double p) const { return p > lower && p < upper; }
  bool degenerate() const { return !(lower < upper); }
};

inline PWindow p_window(const NuFunction& n) {
  const double mass = n.measure().total_mass();
  if (!(mass > 0.0)) throw DomainError("zero-mass measure: phi is constant and has no Hardy window");
  if (mass > 1.0 + 1e-12) throw DomainError("total mass must lie in (0, 1]");
  const double j = n.measure().sup_atom();
  return {1.0 / mass, j > 0.0 ? 1.0 / j : kInf};
}

struct LineSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double radius_cap = 1048576.0;  // 2^20
  // Abscissae where the integrand may peak as y -> 0, typically atoms.
  std::vector<double> hints;

  quad::Tolerance tolerance() const { return {abs_tol, rel_tol}; }
};

struct LineIntegral {
  double value = 0.0;
  bool converged = false;
  bool diverging = false;  // sustained growth under radius doubling
  double radius = 0.0;     // truncation radius reached
  std::vector<double> partials;
  std::string failure;
};

namespace detail {

// int_a^b g(x) dx where one end may sit on a hint h; x = h + y sinh(u) spreads
// the near-axis peak |x - h|^-s over a range of u of order log(1/y).
template <class G>
double hint_segment(G&& g, double a, double b, bool at_a, bool at_b, double y, const quad::Tolerance& tol) {
  if (at_a && at_b) {
    const double m = 0.5 * (a + b);
    return hint_segment(g, a, m, true, false, y, tol) + hint_segment(g, m, b, false, true, y, tol);
  }
  if (!at_a && !at_b) return quad::gauss_kronrod(g, a, b, tol).value;
  const double h = at_a ? a : b, s = at_a ? 1.0 : -1.0;
  auto w = [&](double u) { return g(h + s * y * std::sinh(u)) * y * std::cosh(u); };
  return quad::gauss_kronrod(w, 0.0, std::asinh((b - a) / y), tol).value;
}

// int_R g(x) dx: a central interval split at the hints, then bands
// [R, 2R] u [-2R, -R] until the sum settles, grows, or hits the radius cap.
template <class G>
LineIntegral line_integral(G&& g, double y, const LineSpec& spec) {
  LineIntegral out;
  const auto tol = spec.tolerance();
  std::vector<double> hints;
  for (double h : spec.hints) {
    if (std::isfinite(h)) hints.push_back(h);
  }
  std::sort(hints.begin(), hints.end());
  hints.erase(std::unique(hints.begin(), hints.end()), hints.end());
  double r0 = std::max(1.0, 10.0 * y);
  for (double h : hints) r0 = std::max(r0, 2.0 * std::abs(h) + 1.0);
  try {
    std::vector<double> pts{-r0};
    pts.insert(pts.end(), hints.begin(), hints.end());
    pts.push_back(r0);
    double central = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      central += hint_segment(g, pts[k], pts[k + 1], k > 0, k + 2 < pts.size(), y, tol);
    }
    auto band = [&](double r1, double r2) {
      return quad::gauss_kronrod(g, r1, r2, tol).value + quad::gauss_kronrod(g, -r2, -r1, tol).value;
    };
    quad::DoublingPolicy policy;
    policy.abs_tol = spec.abs_tol;
    policy.rel_tol = spec.rel_tol;
    policy.radius_cap = spec.radius_cap;
    const auto r = quad::sum_doubling(band, central, r0, policy);
    out.value = r.value;
    out.converged = r.converged && std::isfinite(r.value);
    out.diverging = r.diverging;
    out.radius = r.radius;
    out.partials = r.partials;
    if (!out.converged) out.failure = r.diverging ? "partial integrals grow with radius" : "radius cap reached";
  } catch (const Error& e) {
    out.converged = false;
    out.failure = e.what();
  }
  return out;
}

}  // namespace detail

// int |phi(x + iy)|^p dx.
inline LineIntegral line_p_norm(const std::function<cplx(cplx)>& phi, double p, double y, const LineSpec& spec = {}) {
  if (!(p > 0.0) || !(y > 0.0)) throw DomainError("line_p_norm needs p > 0 and y > 0");
  return detail::line_integral([&](double x) { return std::pow(std::abs(phi(cplx(x, y))), p); }, y, spec);
}

// int exp(-p U(x, y)) dx/(1 + x^2) = int |phi(x + iy)|^-p dx/(1 + x^2); grows
// without bound for p > 1/nu(R).
inline LineIntegral weighted_diagnostic(const std::function<cplx(cplx)>& phi, double p, double y,
                                        const LineSpec& spec = {}) {
  if (!(p > 0.0) || !(y > 0.0)) throw DomainError("weighted_diagnostic needs p > 0 and y > 0");
  return detail::line_integral(
      [&](double x) { return std::pow(std::abs(phi(cplx(x, y))), -p) / (1.0 + x * x); }, y, spec);
}

// Line norms at y, y/2, y/4, ... as the line approaches the boundary.
struct Refinement {
  std::vector<double> ys;
  std::vector<double> values;
  bool diverging = false;  // `growth_run` consecutive increases, none shrinking
  bool settled = false;    // an increment fell below tolerance
  std::string failure;
};

inline Refinement near_axis_refinement(const std::function<cplx(cplx)>& phi, double p, double y,
                                       const LineSpec& spec = {}, int max_halvings = 12, int growth_run = 6) {
  Refinement out;
  int growth = 0;
  double last = 0.0;
  for (int k = 0; k <= max_halvings; ++k) {
    const double yk = std::ldexp(y, -k);
    const auto n = line_p_norm(phi, p, yk, spec);
    if (!n.converged) {
      out.failure = "line norm at y = " + std::to_string(yk) + ": " + n.failure;
      return out;
    }
    out.ys.push_back(yk);
    out.values.push_back(n.value);
    if (k == 0) continue;
    const double d = n.value - out.values[out.values.size() - 2];
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(n.value));
    if (std::abs(d) <= tol) {
      out.settled = true;
      return out;
    }
    growth = (d > tol && (growth == 0 || d >= 0.99 * last)) ? growth + 1 : (d > tol ? 1 : 0);
    last = d;
    if (growth >= growth_run) {
      out.diverging = true;
      return out;
    }
  }
  return out;
}

// int |phi(x)|^p dx over the boundary, with phi(x) = exp(U(x) + i pi nu(x)).
inline LineIntegral boundary_p_norm(const PLogFunction& P, double p, const LineSpec& spec = {}) {
  if (!(p > 0.0)) throw DomainError("boundary_p_norm needs p > 0");
  const auto& n = P.log_part.nu;
  const double beta = P.log_part.beta;
  const auto tol = spec.tolerance();
  auto g = [&](double c, double d) {
    if (d == 0.0 && n.measure().is_atom(c)) return 0.0;
    return std::exp(p * boundary_log_modulus_near(n, beta, c, d, tol));
  };
  auto segments = [&](double a, double b) {
    std::vector<double> pts{a};
    for (double c : n.measure().breakpoints()) {
      if (c > pts.back() && c < b) pts.push_back(c);
    }
    pts.push_back(b);
    double sum = 0.0, error = 0.0, l1 = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const auto r = quad::tanh_sinh_ends(g, pts[k], pts[k + 1], tol);
      sum += r.value;
      error += r.error;
      l1 += r.l1;
    }
    quad::detail::check("tanh_sinh", error, l1, tol);
    return sum;
  };
  LineIntegral out;
  double r0 = 1.0;
  for (double c : n.measure().breakpoints()) r0 = std::max(r0, 2.0 * std::abs(c) + 1.0);
  try {
    quad::DoublingPolicy policy;
    policy.abs_tol = spec.abs_tol;
    policy.rel_tol = spec.rel_tol;
    policy.radius_cap = spec.radius_cap;
    const auto r = quad::sum_doubling([&](double r1, double r2) { return segments(r1, r2) + segments(-r2, -r1); },
                                      segments(-r0, r0), r0, policy);
    out.value = r.value;
    out.converged = r.converged;
    out.diverging = r.diverging;
    out.radius = r.radius;
    out.partials = r.partials;
    if (!out.converged) out.failure = r.diverging ? "partial integrals grow with radius" : "radius cap reached";
  } catch (const Error& e) {
    out.failure = e.what();
  }
  return out;
}

struct SweepEntry {
  double y = 0.0;
  double p = 0.0;
  double value = 0.0;
  bool converged = false;
  double radius = 0.0;
  bool radius_diverging = false;      // growth under radius doubling at this y
  bool refinement_diverging = false;  // growth as y halves towards the axis
  std::string failure;
};

struct NormSweep {
  std::vector<SweepEntry> entries;  // sorted by (y, p)
};

// Line norms of phi = exp(f) for every (p, y). An entry is converged when the
// norm at y converges and halving y towards the axis does not show sustained
// growth.
inline NormSweep window_sweep(const PLogFunction& P, const std::vector<double>& ps, const std::vector<double>& ys,
                              const LineSpec& spec = {}) {
  if (detect_exceptional(P.log_part.nu)) {
    throw DomainError("exceptional class: use the closed form c/(a - z)^theta instead of a sweep");
  }
  for (double p : ps) {
    if (!(p > 0.0)) throw DomainError("window_sweep: p must be positive");
  }
  for (double y : ys) {
    if (!(y > 0.0)) throw DomainError("window_sweep: y must be positive");
  }
  LineSpec s = spec;
  const auto bps = P.log_part.nu.measure().breakpoints();
  s.hints.insert(s.hints.end(), bps.begin(), bps.end());
  auto phi = [&P](cplx z) { return eval_phi(P, z); };
  NormSweep out;
  out.entries.resize(ps.size() * ys.size());
  detail::parallel_for(out.entries.size(), [&](std::size_t k) {
    SweepEntry& e = out.entries[k];
    e.y = ys[k / ps.size()];
    e.p = ps[k % ps.size()];
    const auto n = line_p_norm(phi, e.p, e.y, s);
    e.value = n.value;
    e.radius = n.radius;
    e.radius_diverging = n.diverging;
    e.failure = n.failure;
    if (!n.converged) return;
    const auto r = near_axis_refinement(phi, e.p, e.y, s);
    e.refinement_diverging = r.diverging;
    e.converged = !r.diverging && e.value > 0.0;
    if (r.diverging) e.failure = "line norms grow without settling as y -> 0";
  });
  std::stable_sort(out.entries.begin(), out.entries.end(), [](const SweepEntry& a, const SweepEntry& b) {
    return std::tie(a.y, a.p) < std::tie(b.y, b.p);
  });
  return out;
}

}  // namespace pickfn

#endif  // PICKFN_HARDY_HPP
