#ifndef PICKFN_PICK_HPP
#define PICKFN_PICK_HPP

// Pick (Nevanlinna) functions in canonical form and the primitives class
// P-int cap P, represented by (alpha, beta, nu).

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "pickfn/error.hpp"
#include "pickfn/measure.hpp"
#include "pickfn/quadrature.hpp"

namespace pickfn {

// Phi(z) = alpha z + beta + int (1/(t - z) - t/(1 + t^2)) dsigma(t).
struct PickCanonical {
  double alpha = 0.0;
  double beta = 0.0;
  StieltjesMeasure sigma;
};

// Primitive of a Pick function that is itself Pick:
// Phi(z) = alpha z + beta + i pi nu(-inf) + int log(sqrt(1 + t^2)/(t - z)) dnu(t).
struct PrimitivePick {
  double alpha = 0.0;
  double beta = 0.0;
  NuFunction nu;

  PrimitivePick() = default;
  PrimitivePick(double a, double b, NuFunction n) : alpha(a), beta(b), nu(std::move(n)) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be >= 0");
    if (!std::isfinite(beta)) throw DomainError("beta must be finite");
  }
};

namespace detail {

// Breakpoints around the peak of a kernel centred at x with width y.
inline IntegrationHints peak_hints(double x, double y) {
  return {{x - 10.0 * y, x - y, x, x + y, x + 10.0 * y}, std::nullopt};
}

// Principal branch, one factor at a time.
inline cplx log_kernel(double t, cplx z) { return 0.5 * std::log1p(t * t) - std::log(t - z); }

inline void require_upper(cplx z, const char* who) {
  if (!(z.imag() > 0.0)) throw DomainError(std::string(who) + ": requires Im z > 0");
}

}  // namespace detail

inline cplx eval_pick(const PickCanonical& p, cplx z, const quad::Tolerance& tol = {}) {
  if (z.imag() == 0.0) throw DomainError("eval_pick: Im z must be non-zero");
  if (z.imag() < 0.0) return std::conj(eval_pick(p, std::conj(z), tol));
  auto kernel = [z](double t) { return 1.0 / (t - z) - t / (1.0 + t * t); };
  auto r = p.sigma.integrate(kernel, detail::peak_hints(z.real(), z.imag()), tol);
  return p.alpha * z + p.beta + r.value;
}

// Log form, upper half-plane only.
inline cplx eval_primitive(const PrimitivePick& p, cplx z, const quad::Tolerance& tol = {}) {
  detail::require_upper(z, "eval_primitive");
  auto r = p.nu.measure().integrate([z](double t) { return detail::log_kernel(t, z); },
                                    detail::peak_hints(z.real(), z.imag()), tol);
  return p.alpha * z + p.beta + cplx(0.0, kPi * p.nu.baseline()) + r.value;
}

// Any z off the real axis; the lower half-plane by reflection.
inline cplx eval_primitive_reflected(const PrimitivePick& p, cplx z, const quad::Tolerance& tol = {}) {
  if (z.imag() == 0.0) throw DomainError("eval_primitive: Im z must be non-zero");
  if (z.imag() < 0.0) return std::conj(eval_primitive(p, std::conj(z), tol));
  return eval_primitive(p, z, tol);
}

// The same function through alpha z + beta + int (1/(t - z) - t/(1 + t^2)) nu(t) dt.
// Valid on both half-planes; used as an independent route to eval_primitive.
inline cplx eval_primitive_nu_form(const PrimitivePick& p, cplx z, const quad::Tolerance& tol = {}) {
  if (z.imag() == 0.0) throw DomainError("eval_primitive_nu_form: Im z must be non-zero");
  const double sgn = z.imag() > 0.0 ? 1.0 : -1.0;
  auto kernel = [z](double t) -> cplx { return 1.0 / (t - z) - t / (1.0 + t * t); };
  auto anti = [z, sgn](double t) -> cplx {
    if (t == kInf) return 0.0;
    if (t == -kInf) return cplx(0.0, -kPi * sgn);
    return std::log(t - z) - 0.5 * std::log1p(t * t);
  };
  auto r = integrate_times_nu(p.nu, kernel, anti, -kInf, kInf,
                              detail::peak_hints(z.real(), std::abs(z.imag())), tol);
  return p.alpha * z + p.beta + r.value;
}

inline cplx derivative(const PrimitivePick& p, cplx z, const quad::Tolerance& tol = {}) {
  detail::require_upper(z, "derivative");
  auto r = p.nu.measure().integrate([z](double t) { return 1.0 / (t - z); },
                                    detail::peak_hints(z.real(), z.imag()), tol);
  return p.alpha + r.value;
}

struct HarmonicParts {
  double U = 0.0;
  double V = 0.0;
};

inline HarmonicParts harmonic_parts(const PrimitivePick& p, double x, double y,
                                    const quad::Tolerance& tol = {}) {
  if (!(y > 0.0)) throw DomainError("harmonic_parts: requires y > 0");
  const auto hints = detail::peak_hints(x, y);
  const auto& m = p.nu.measure();
  auto u = m.integrate(
      [x, y](double t) { return 0.5 * (std::log1p(t * t) - std::log(y * y + (t - x) * (t - x))); },
      hints, tol);
  auto v = m.integrate([x, y](double t) { return 0.5 * kPi - std::atan((t - x) / y); }, hints, tol);
  return {p.alpha * x + p.beta + u.value, p.alpha * y + kPi * p.nu.baseline() + v.value};
}

// Real part of the boundary value; singular at atoms.
inline double boundary_U(const PrimitivePick& p, double x, const quad::Tolerance& tol = {}) {
  if (p.nu.measure().is_atom(x)) throw DomainError("boundary singularity at atom");
  IntegrationHints hints;
  hints.singular = x;
  auto u = p.nu.measure().integrate(
      [x](double t) {
        // tanh-sinh abscissae can round onto x; a single point carries no weight.
        if (t == x) return 0.0;
        return 0.5 * std::log1p(t * t) - std::log(std::abs(t - x));
      },
      hints, tol);
  return p.alpha * x + p.beta + u.value;
}

// Limit of V(x, y) as y decreases to 0: pi nu(x), midpoint convention at jumps.
inline double boundary_V(const PrimitivePick& p, double x) { return kPi * p.nu.cdf(x); }

}  // namespace pickfn

#endif  // PICKFN_PICK_HPP
