#ifndef PICKFN_STARLIKE_HPP
#define PICKFN_STARLIKE_HPP

// Universally starlike functions Psi(z) = z phi(z): builders from a
// probability measure mu on [0, 1], from a boundary density v on [1, inf) and
// from a convex exponent psi; the certification pipeline; and a geometric
// check of starlikeness of the image of a circular domain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pickfn/error.hpp"
#include "pickfn/measure.hpp"
#include "pickfn/plog.hpp"
#include "pickfn/polylog.hpp"
#include "pickfn/quadrature.hpp"
#include "pickfn/transforms.hpp"

namespace pickfn {

struct UniversalCandidate {
  std::function<cplx(cplx)> phi;             // on C \ [1, inf)
  std::function<cplx(cplx)> log_derivative;  // phi'/phi; central differences when empty
  std::optional<PLogFunction> plog;          // exponential representation, when known
  std::optional<BoundaryDensity> density;    // v with phi = (1/pi) int v/(t - z), when known
  std::string origin;

  cplx Psi(cplx z) const { return z * phi(z); }

  cplx phi_log_derivative(cplx z) const {
    if (log_derivative) return log_derivative(z);
    const double h = 1e-5 * std::max(1.0, std::abs(z));
    return (phi(z + h) - phi(z - h)) / (2.0 * h * phi(z));
  }

  // Psi'/Psi = 1/z + phi'/phi.
  cplx Psi_log_derivative(cplx z) const { return 1.0 / z + phi_log_derivative(z); }
};

namespace detail {

// int g(t) dmu(t) with a split at t = Re(1/z), where 1 - tz is smallest.
template <class G>
cplx integrate_mu(const StieltjesMeasure& mu, G&& g, cplx z, const quad::Tolerance& tol) {
  IntegrationHints hints;
  if (z != cplx(0.0)) {
    const double t = (1.0 / z).real();
    if (t > 0.0 && t < 1.0) hints.points.push_back(t);
  }
  return mu.integrate(g, hints, tol).value;
}

inline void require_unit_probability(const StieltjesMeasure& mu) {
  for (const auto& a : mu.atoms()) {
    if (a.location < 0.0 || a.location > 1.0) throw DomainError("mu must be supported in [0, 1]");
  }
  for (const auto& p : mu.pieces()) {
    if (p.lo() < 0.0 || p.hi() > 1.0) throw DomainError("mu must be supported in [0, 1]");
  }
  if (std::abs(mu.total_mass() - 1.0) > 1e-12) {
    throw DomainError("mu must have total mass 1 (got " + std::to_string(mu.total_mass()) + ")");
  }
}

inline void require_off_cut(cplx z, const char* who) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || (z.imag() == 0.0 && z.real() >= 1.0)) {
    throw DomainError(std::string(who) + ": z must lie in C \\ [1, inf)");
  }
}

}  // namespace detail

// L_mu(z) = int_[0,1] log(1/(1 - tz)) dmu(t), principal branch.
inline cplx l_mu(const StieltjesMeasure& mu, cplx z, const quad::Tolerance& tol = {}) {
  detail::require_off_cut(z, "l_mu");
  return detail::integrate_mu(mu, [z](double t) { return -std::log(1.0 - t * z); }, z, tol);
}

struct IdentityCheck {
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
};

// L_mu(z) against
// -int log sqrt(1 + t^2) dmu + int_1^inf (1/(t - z) - t/(1 + t^2)) (1 - mu(1/t)) dt,
// mu(x) = mu((-inf, x)).
inline IdentityCheck l_mu_identity_check(const StieltjesMeasure& mu, cplx z, const quad::Tolerance& tol = {}) {
  detail::require_unit_probability(mu);
  detail::require_upper(z, "l_mu_identity_check");
  IdentityCheck out;
  out.lhs = l_mu(mu, z, tol);
  const double shift = mu.integrate([](double t) { return 0.5 * std::log1p(t * t); }, {}, tol).value;
  auto g = [&mu, z](double t) -> cplx {
    return (1.0 / (t - z) - t / (1.0 + t * t)) * (1.0 - mu.mass_below(1.0 / t));
  };
  std::vector<double> hints{z.real() - z.imag(), z.real(), z.real() + z.imag()};
  double top = 2.0 + 2.0 * std::abs(z);
  for (double b : mu.breakpoints()) {
    if (b > 0.0) {
      hints.push_back(1.0 / b);
      top = std::max(top, 2.0 / b);
    }
  }
  const cplx body = quad::integrate(g, 1.0, top, hints, tol).value;
  const cplx tail = quad::to_infinity(g, top, tol).value;
  out.rhs = -shift + body + tail;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

// phi(z) = exp(L_mu(z)).
inline UniversalCandidate build_from_mu(const StieltjesMeasure& mu, const quad::Tolerance& tol = {}) {
  detail::require_unit_probability(mu);
  const double beta = -mu.integrate([](double t) { return 0.5 * std::log1p(t * t); }, {}, tol).value;
  UniversalCandidate c;
  c.plog = PLogFunction{{beta, nu_from_mu_unit(mu)}};
  c.phi = [mu, tol](cplx z) { return std::exp(l_mu(mu, z, tol)); };
  c.log_derivative = [mu, tol](cplx z) {
    detail::require_off_cut(z, "phi'/phi");
    return detail::integrate_mu(mu, [z](double t) { return t / (1.0 - t * z); }, z, tol);
  };
  c.origin = "mu";
  return c;
}

// Measured values behind the admissibility conditions on v.
struct VAdmissibility {
  double support_lo = 0.0;           // v = 0 below this point
  double min_sample = 0.0;           // smallest sampled value of v
  bool finite_samples = true;        // v finite wherever sampled
  double normalization = 0.0;        // int_1^inf v(t)/t dt
  double min_det = 0.0;              // smallest determinant over the pair sample
  double det_x1 = 0.0, det_x2 = 0.0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

inline VAdmissibility check_v_admissible(const BoundaryDensity& v, const PVQuadSpec& q = {}, std::size_t pairs = 50,
                                         std::uint64_t seed = 20250101) {
  VAdmissibility r;
  r.support_lo = v.lo();
  if (v.is_zero()) {
    r.failures.push_back("v is identically zero");
    return r;
  }
  if (!(v.lo() >= 1.0)) r.failures.push_back("v must vanish below 1; support starts at " + std::to_string(v.lo()));
  // Samples on a geometric grid over the support, plus both sides of every cut.
  std::vector<double> xs;
  const double lo = std::max(v.lo(), 1.0);
  const double hi = std::isfinite(v.hi()) ? v.hi() : lo + 1e3;
  for (int k = 0; k <= 400; ++k) xs.push_back(lo + (hi - lo) * std::pow(k / 400.0, 2.0));
  for (double c : v.all_cuts()) {
    xs.push_back(c);
    xs.push_back(c - 1e-9 * (1.0 + std::abs(c)));
    xs.push_back(c + 1e-9 * (1.0 + std::abs(c)));
  }
  r.min_sample = kInf;
  for (double x : xs) {
    const double val = v(x);
    if (!std::isfinite(val)) r.finite_samples = false;
    r.min_sample = std::min(r.min_sample, val);
  }
  if (!r.finite_samples) r.failures.push_back("v is not finite everywhere: point masses are not in any L_p, p > 1");
  if (r.min_sample < 0.0) r.failures.push_back("v takes negative values (min " + std::to_string(r.min_sample) + ")");
  if (!r.failures.empty()) return r;

  r.normalization = detail::integrate_line(v, [](double t) { return 1.0 / t; }, 0.0, {}, q);
  if (!(std::abs(r.normalization - kPi) <= 1e-8)) {
    r.failures.push_back("int v(t)/t dt = " + std::to_string(r.normalization) + ", expected pi");
  }

  // Pairs in (1, top), kept 1e-2 away from the cuts of v.
  const double top = std::isfinite(v.hi()) ? v.hi() : lo + 10.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, top);
  auto clear = [&](double x) {
    for (double c : v.all_cuts()) {
      if (std::abs(x - c) < 1e-2) return false;
    }
    return true;
  };
  r.min_det = kInf;
  std::size_t found = 0;
  while (found < pairs) {
    double a = u(rng), b = u(rng);
    if (!clear(a) || !clear(b) || a == b) continue;
    if (a > b) std::swap(a, b);
    const double d = det_condition(v, a, b, q);
    if (d < r.min_det) {
      r.min_det = d;
      r.det_x1 = a;
      r.det_x2 = b;
    }
    ++found;
  }
  if (r.min_det < -1e-8) {
    r.failures.push_back("determinant condition violated: " + std::to_string(r.min_det) + " at (" +
                         std::to_string(r.det_x1) + ", " + std::to_string(r.det_x2) + ")");
  }
  return r;
}

// phi(z) = (1/pi) int_1^inf v(t)/(t - z) dt.
inline UniversalCandidate build_from_v(const BoundaryDensity& v, const PVQuadSpec& q = {},
                                       std::uint64_t seed = 20250101) {
  const auto r = check_v_admissible(v, q, 50, seed);
  if (!r.ok()) {
    std::string msg = "inadmissible v:";
    for (const auto& f : r.failures) msg += " " + f + ";";
    throw DomainError(msg);
  }
  UniversalCandidate c;
  c.phi = [v, q](cplx z) { return cauchy_transform(v, z, q); };
  c.log_derivative = [v, q](cplx z) { return cauchy_transform_derivative(v, z, q) / cauchy_transform(v, z, q); };
  c.density = v;
  c.origin = "v";
  return c;
}

struct ConvexBuild {
  UniversalCandidate candidate;
  double b = 0.0;  // int_a^inf e^-psi(t)/t dt
};

namespace detail {

// int_a^inf f over [a, a + 1] and doubling bands beyond.
inline quad::DoublingResult integrate_from(const std::function<double(double)>& f, double a,
                                           const quad::Tolerance& tol) {
  const double base = quad::gauss_kronrod(f, a, a + 1.0, tol).value;
  quad::DoublingPolicy policy;
  policy.abs_tol = 1e-14;
  policy.rel_tol = 1e-13;
  return quad::sum_doubling(
      [&](double r1, double r2) { return quad::gauss_kronrod(f, a + r1, a + r2, tol).value; }, base, 1.0, policy);
}

}  // namespace detail

// Psi(z) = (z/b) int_a^inf e^-psi(t)/(t - z) dt for convex psi on [a, inf).
inline ConvexBuild build_from_convex(double a, const std::function<double(double)>& psi, double gamma,
                                     const PVQuadSpec& q = {}) {
  if (!(a >= 1.0) || !std::isfinite(a)) throw DomainError("build_from_convex: a must be >= 1");
  if (!(gamma > 1.0)) throw DomainError("build_from_convex: gamma must exceed 1");
  // Second differences on a fine grid near a and a coarse one further out.
  for (double h : {0.01, 0.5}) {
    for (int k = 1; k < 400; ++k) {
      const double t = a + k * h;
      const double d2 = psi(t - h) - 2.0 * psi(t) + psi(t + h);
      if (!(d2 >= -1e-9)) {
        throw DomainError("psi fails the convexity spot-check at t = " + std::to_string(t) +
                          " (second difference " + std::to_string(d2) + ")");
      }
    }
  }
  const quad::Tolerance tol{1e-14, 1e-12};
  const auto g = detail::integrate_from([&](double t) { return std::exp(-gamma * psi(t)); }, a, tol);
  if (!g.converged) throw DomainError("int_a^inf exp(-gamma psi) does not converge for gamma = " + std::to_string(gamma));
  const auto b = detail::integrate_from([&](double t) { return std::exp(-psi(t)) / t; }, a, tol);
  if (!b.converged || !(b.value > 0.0)) throw DomainError("b = int_a^inf exp(-psi(t))/t dt diverges");
  const double scale = kPi / b.value;
  BoundaryDensity v([psi, scale](double t) { return scale * std::exp(-psi(t)); }, a, kInf,
                    BoundaryDensity::Decay::exponential);
  ConvexBuild out;
  out.b = b.value;
  out.candidate.phi = [v, q](cplx z) { return cauchy_transform(v, z, q); };
  out.candidate.log_derivative = [v, q](cplx z) {
    return cauchy_transform_derivative(v, z, q) / cauchy_transform(v, z, q);
  };
  out.candidate.density = v;
  out.candidate.origin = "convex";
  return out;
}

// phi(z) = Li_alpha(z)/z.
inline UniversalCandidate polylog_candidate(double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("polylog_candidate: alpha must be >= 0");
  UniversalCandidate c;
  c.phi = [alpha](cplx z) {
    if (std::abs(z) < 1e-3) {
      // Li_alpha(z)/z = sum z^(k-1)/k^alpha.
      cplx sum = 0.0, power = 1.0;
      for (int k = 1; k < 60; ++k) {
        sum += power / std::pow(static_cast<double>(k), alpha);
        power *= z;
      }
      return sum;
    }
    return polylog(alpha, z) / z;
  };
  c.origin = "polylog(" + std::to_string(alpha) + ")";
  return c;
}

struct ExceptionalFit {
  double theta = 0.0;
  double a = kInf;  // no point when theta = 0
};

struct CertificationReport {
  enum class Verdict { member, exceptional, rejected, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  std::string failed_step;  // empty, or the step that decided a rejection
  std::string detail;
  double phi0_error = 0.0;
  bool holomorphy_exact = false;   // decided from the support of nu
  double holomorphy_residual = 0.0;  // largest extrapolated |Im phi(x + i0)|/max(1, |phi|)
  double holomorphy_x = 0.0;
  std::optional<ExceptionalFit> exceptional;
  std::optional<MembershipReport> membership;
};

inline const char* to_string(CertificationReport::Verdict v) {
  switch (v) {
    case CertificationReport::Verdict::member: return "member";
    case CertificationReport::Verdict::exceptional: return "exceptional";
    case CertificationReport::Verdict::rejected: return "rejected";
    default: return "inconclusive";
  }
}

namespace detail {

// a^theta/(a - z)^theta.
inline cplx whitelist_value(const ExceptionalFit& e, cplx z) {
  if (e.theta == 0.0) return 1.0;
  return std::pow(e.a, e.theta) * std::exp(-e.theta * std::log(e.a - z));
}

// phi'/phi = theta/(a - z) for the exceptional class: 1/(phi'/phi) is affine
// in z with slope -1/theta.
inline std::optional<ExceptionalFit> fit_exceptional(const UniversalCandidate& c) {
  const std::vector<cplx> probes{cplx(0.0, 1.0), cplx(0.0, 2.0), cplx(0.5, 0.5), cplx(-2.0, 0.3), cplx(3.0, 1.5)};
  std::vector<cplx> g;
  for (cplx z : probes) g.push_back(c.phi_log_derivative(z));
  bool flat = true;
  for (cplx v : g) flat = flat && std::abs(v) <= 1e-9;
  if (flat) return ExceptionalFit{0.0, kInf};
  for (cplx v : g) {
    if (std::abs(v) <= 1e-12) return std::nullopt;
  }
  const cplx slope = (1.0 / g[1] - 1.0 / g[0]) / (probes[1] - probes[0]);
  const cplx theta = -1.0 / slope;
  const cplx a = theta / g[0] + probes[0];
  if (std::abs(theta.imag()) > 1e-6 * std::abs(theta) || std::abs(a.imag()) > 1e-6 * (1.0 + std::abs(a))) {
    return std::nullopt;
  }
  for (std::size_t k = 2; k < probes.size(); ++k) {
    const cplx model = theta / (a - probes[k]);
    if (std::abs(g[k] - model) > 1e-6 * (1.0 + std::abs(model))) return std::nullopt;
  }
  return ExceptionalFit{theta.real(), a.real()};
}

}  // namespace detail

// (i) phi(0) = 1; (ii) phi holomorphic across (-inf, 1); exceptional members
// are matched against a^theta/(a - z)^theta, a >= 1; otherwise (iii) the
// P_log membership test.
inline CertificationReport certify_universal(const UniversalCandidate& c) {
  using V = CertificationReport::Verdict;
  CertificationReport r;
  auto reject = [&](const char* step, std::string why) {
    r.verdict = V::rejected;
    r.failed_step = step;
    r.detail = std::move(why);
    return r;
  };
  try {
    const cplx p0 = c.phi(0.0);
    r.phi0_error = std::abs(p0 - 1.0);
    if (!(r.phi0_error <= 1e-10)) return reject("phi(0)", "|phi(0) - 1| = " + std::to_string(r.phi0_error));

    if (c.plog) {
      // nu vanishes below 1 exactly when phi continues across (-inf, 1).
      const auto& nu = c.plog->log_part.nu;
      r.holomorphy_exact = true;
      const double lo = nu.measure().empty() ? kInf : nu.measure().support_hull().first;
      if (nu.baseline() != 0.0 || lo < 1.0) {
        r.holomorphy_x = std::min(lo, 1.0);
        return reject("holomorphy", "nu has mass below 1");
      }
    } else {
      // Im phi(x + iy) = a0 + a1 y + a3 y^3 + ... fitted at y = h, h/2, h/4,
      // with h shrinking towards the branch point; a0 is the boundary value
      // and vanishes where phi is real-analytic.
      constexpr std::size_t n = 400;
      std::vector<double> res(n, 0.0), xs(n);
      std::vector<std::string> errors(n);
      detail::parallel_for(n, [&](std::size_t k) {
        xs[k] = -5.0 + (6.0 - 1e-3) * (static_cast<double>(k) + 0.5) / n;
        const double h = std::min(1e-3, 0.02 * (1.0 - xs[k]));
        try {
          const cplx p1 = c.phi(cplx(xs[k], h));
          const double g2 = c.phi(cplx(xs[k], h / 2.0)).imag();
          const double g4 = c.phi(cplx(xs[k], h / 4.0)).imag();
          const double a0 = (p1.imag() - 10.0 * g2 + 16.0 * g4) / 7.0;
          res[k] = std::isfinite(a0) ? std::abs(a0) / std::max(1.0, std::abs(p1)) : kInf;
        } catch (const Error& e) {
          errors[k] = e.what();
        }
      });
      for (std::size_t k = 0; k < n; ++k) {
        if (!errors[k].empty()) {
          r.detail = "evaluation failed at x = " + std::to_string(xs[k]) + ": " + errors[k];
          return r;
        }
        if (res[k] > r.holomorphy_residual) {
          r.holomorphy_residual = res[k];
          r.holomorphy_x = xs[k];
        }
      }
      if (!(r.holomorphy_residual <= 1e-6)) {
        return reject("holomorphy", "Im phi(x + i0) = " + std::to_string(r.holomorphy_residual) +
                                        " at x = " + std::to_string(r.holomorphy_x));
      }
    }

    std::optional<ExceptionalFit> fit;
    if (c.plog) {
      if (const auto e = detect_exceptional(c.plog->log_part.nu, c.plog->log_part.beta)) {
        fit = ExceptionalFit{e->theta, e->has_point() ? e->a : kInf};
      }
    } else {
      fit = detail::fit_exceptional(c);
    }
    if (fit) {
      r.exceptional = fit;
      if (fit->theta < -1e-9 || fit->theta > 1.0 + 1e-9) {
        return reject("exceptional-whitelist", "theta = " + std::to_string(fit->theta) + " outside [0, 1]");
      }
      if (fit->theta != 0.0 && !(fit->a >= 1.0 - 1e-9)) {
        return reject("exceptional-whitelist", "a = " + std::to_string(fit->a) + " below 1");
      }
      for (cplx z : {cplx(0.0, 1.0), cplx(0.5, 0.5), cplx(-3.0, 0.2)}) {
        const cplx w = detail::whitelist_value(*fit, z);
        if (std::abs(c.phi(z) - w) > 1e-8 * (1.0 + std::abs(w))) {
          return reject("exceptional-whitelist", "phi differs from a^theta/(a - z)^theta");
        }
      }
      r.verdict = V::exceptional;
      return r;
    }

    r.membership = c.plog ? membership_test(*c.plog) : membership_test(c.phi, GridSpec::standard());
    switch (r.membership->overall) {
      case MembershipReport::Overall::member:
        r.verdict = V::member;
        return r;
      case MembershipReport::Overall::non_member:
        return reject("membership", "a P_log criterion failed on the grid");
      default:
        r.detail = r.membership->failure;
        return r;
    }
  } catch (const Error& e) {
    r.verdict = V::inconclusive;
    r.detail = e.what();
    return r;
  }
}

class CircularDomain {
 public:
  enum class Kind { disk, half_plane };

  // {|z - center| < radius}.
  static CircularDomain disk(cplx center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("disk radius must be positive");
    if (!(std::abs(center) < radius)) throw DomainError("disk must contain 0");
    const double to_ray = center.real() >= 1.0 ? std::abs(center.imag()) : std::abs(center - 1.0);
    if (!(to_ray > radius)) throw DomainError("disk must not meet [1, inf)");
    CircularDomain d;
    d.kind_ = Kind::disk;
    d.center_ = center;
    d.radius_ = radius;
    return d;
  }

  // {z : Re((z - point) conj(normal)) > 0}.
  static CircularDomain half_plane(cplx point, cplx normal) {
    if (!(std::abs(normal) > 0.0)) throw DomainError("half-plane normal must be non-zero");
    normal /= std::abs(normal);
    if (!((-point * std::conj(normal)).real() > 0.0)) throw DomainError("half-plane must contain 0");
    // [1, inf) stays outside iff its start does and the ray does not point inwards.
    if (((1.0 - point) * std::conj(normal)).real() > 0.0 || normal.real() > 0.0) {
      throw DomainError("half-plane must not meet [1, inf)");
    }
    CircularDomain d;
    d.kind_ = Kind::half_plane;
    d.point_ = point;
    d.normal_ = normal;
    return d;
  }

  Kind kind() const { return kind_; }
  cplx center() const { return center_; }
  double radius() const { return radius_; }
  cplx point() const { return point_; }
  cplx normal() const { return normal_; }

  // Disks of radius 10^k, k = 2, 3, 4, tangent to the boundary line at the
  // foot of the perpendicular from 0.
  std::vector<CircularDomain> inscribed_disks() const {
    if (kind_ == Kind::disk) return {*this};
    const cplx foot = (point_ * std::conj(normal_)).real() * normal_;
    std::vector<CircularDomain> out;
    for (double R : {1e2, 1e3, 1e4}) {
      CircularDomain d;
      d.center_ = foot + R * normal_;
      d.radius_ = R;
      out.push_back(d);
    }
    return out;
  }

 private:
  Kind kind_ = Kind::disk;
  cplx center_ = 0.0;
  double radius_ = 1.0;
  cplx point_ = 0.0;
  cplx normal_ = 1.0;
};

// Disks |z| < r for r = 0.3, 0.6, 0.9 and the disk |z - 0.25| < 0.74, whose
// boundary passes within 1e-2 of the branch point 1.
inline std::vector<CircularDomain> standard_battery() {
  return {CircularDomain::disk(0.0, 0.3), CircularDomain::disk(0.0, 0.6), CircularDomain::disk(0.0, 0.9),
          CircularDomain::disk(0.25, 0.74)};
}

struct StarlikeEvidence {
  enum class Verdict { pass, fail, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  double min_turning = kInf;
  double argmin_theta = 0.0;
  int winding = 0;
  std::size_t samples = 0;
  cplx center = 0.0;
  double radius = 0.0;
  std::string detail;
  std::vector<StarlikeEvidence> parts;  // inscribed disks of a half-plane
};

inline const char* to_string(StarlikeEvidence::Verdict v) {
  switch (v) {
    case StarlikeEvidence::Verdict::pass: return "pass";
    case StarlikeEvidence::Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

namespace detail {

inline StarlikeEvidence disk_evidence(const UniversalCandidate& c, cplx center, double radius, std::size_t samples) {
  StarlikeEvidence ev;
  ev.center = center;
  ev.radius = radius;
  struct Sample {
    cplx psi;
    double turning = 0.0;
    std::string error;
  };
  auto at = [&](double theta) {
    Sample s;
    try {
      const cplx e = std::polar(1.0, theta);
      const cplx z = center + radius * e;
      s.psi = c.Psi(z);
      // Im(gamma' Psi'/Psi) with gamma' = i r e^(i theta).
      s.turning = (cplx(0.0, radius) * e * c.Psi_log_derivative(z)).imag();
    } catch (const Error& err) {
      s.error = err.what();
    }
    return s;
  };
  auto winding = [](const std::vector<Sample>& s) {
    double total = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      total += std::arg(s[(k + 1) % s.size()].psi / s[k].psi);
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
  };
  std::vector<Sample> cur(samples);
  parallel_for(samples, [&](std::size_t k) { cur[k] = at(2.0 * kPi * static_cast<double>(k) / samples); });
  auto scan = [&](const std::vector<Sample>& s) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (!s[k].error.empty()) {
        ev.detail = "evaluation failed: " + s[k].error;
        return false;
      }
      if (!(std::abs(s[k].psi) > 1e-12)) {
        ev.detail = "Psi vanishes on the boundary";
        return false;
      }
    }
    return true;
  };
  if (!scan(cur)) return ev;
  int w = winding(cur);
  // Refine until the winding number agrees across two refinements.
  int agreements = 0;
  while (agreements < 2 && cur.size() < (std::size_t{1} << 16)) {
    const std::size_t n = cur.size();
    std::vector<Sample> odd(n);
    parallel_for(n, [&](std::size_t k) { odd[k] = at(2.0 * kPi * (2.0 * k + 1.0) / (2.0 * n)); });
    std::vector<Sample> next(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
      next[2 * k] = std::move(cur[k]);
      next[2 * k + 1] = std::move(odd[k]);
    }
    cur = std::move(next);
    if (!scan(cur)) return ev;
    const int w2 = winding(cur);
    agreements = w2 == w ? agreements + 1 : 0;
    w = w2;
  }
  ev.samples = cur.size();
  ev.winding = w;
  for (std::size_t k = 0; k < cur.size(); ++k) {
    if (cur[k].turning < ev.min_turning) {
      ev.min_turning = cur[k].turning;
      ev.argmin_theta = 2.0 * kPi * static_cast<double>(k) / cur.size();
    }
  }
  const bool pass = ev.min_turning >= -1e-9 && ev.winding == 1;
  ev.verdict = pass ? StarlikeEvidence::Verdict::pass : StarlikeEvidence::Verdict::fail;
  return ev;
}

}  // namespace detail

// Turning functional Im(gamma'(theta) Psi'(gamma)/Psi(gamma)) and winding of
// Psi o gamma around 0 on the boundary circle gamma of d.
inline StarlikeEvidence starlike_image_check(const UniversalCandidate& c, const CircularDomain& d,
                                             std::size_t samples = 256) {
  if (samples < 256) throw DomainError("starlike_image_check needs at least 256 samples");
  if (d.kind() == CircularDomain::Kind::disk) return detail::disk_evidence(c, d.center(), d.radius(), samples);
  StarlikeEvidence ev;
  ev.verdict = StarlikeEvidence::Verdict::pass;
  ev.winding = 1;
  for (const auto& disk : d.inscribed_disks()) {
    auto part = detail::disk_evidence(c, disk.center(), disk.radius(), samples);
    if (part.min_turning < ev.min_turning) {
      ev.min_turning = part.min_turning;
      ev.argmin_theta = part.argmin_theta;
    }
    ev.samples = std::max(ev.samples, part.samples);
    if (part.verdict == StarlikeEvidence::Verdict::inconclusive) {
      ev.verdict = StarlikeEvidence::Verdict::inconclusive;
      ev.detail = part.detail;
    } else if (part.verdict == StarlikeEvidence::Verdict::fail && ev.verdict == StarlikeEvidence::Verdict::pass) {
      ev.verdict = StarlikeEvidence::Verdict::fail;
      ev.winding = part.winding;
    }
    ev.parts.push_back(std::move(part));
  }
  ev.center = d.point();
  return ev;
}

}  // namespace pickfn

#endif  // PICKFN_STARLIKE_HPP
