#ifndef PICKFN_POLYLOG_HPP
#define PICKFN_POLYLOG_HPP

// Polylogarithm Li_alpha(z) for real alpha >= 0 on C \ [1, inf).

#include <cmath>
#include <complex>

#include "pickfn/error.hpp"
#include "pickfn/quadrature.hpp"

namespace pickfn {

namespace detail {

inline void require_polylog_domain(double alpha, cplx z) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("polylog: alpha must be finite and >= 0");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("polylog: z must be finite");
  if (z.imag() == 0.0 && z.real() >= 1.0) throw DomainError("polylog: z lies on the cut [1, inf)");
}

}  // namespace detail

// sum_{k >= 1} z^k / k^alpha, for |z| < 1.
inline cplx polylog_series(double alpha, cplx z) {
  detail::require_polylog_domain(alpha, z);
  if (!(std::abs(z) < 1.0)) throw DomainError("polylog_series needs |z| < 1");
  cplx sum = 0.0, power = 1.0;
  for (int k = 1; k < 100000; ++k) {
    power *= z;
    const cplx term = power / std::pow(static_cast<double>(k), alpha);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) || std::abs(power) == 0.0) return sum;
  }
  throw ConvergenceError("polylog_series did not converge", std::abs(power));
}

// (z / Gamma(alpha)) int_0^inf t^(alpha - 1) / (e^t - z) dt, for alpha > 0.
inline cplx polylog_integral(double alpha, cplx z, const quad::Tolerance& tol = {1e-13, 1e-9}) {
  detail::require_polylog_domain(alpha, z);
  if (!(alpha > 0.0)) throw DomainError("polylog_integral needs alpha > 0");
  if (z == cplx(0.0)) return 0.0;
  // 1/(e^t - z) = e^-t/(1 - z e^-t); for |z| > 1 the denominator is smallest
  // near t = log|z|, which becomes a split point.
  auto part = [&](bool imag) {
    return [&, imag](double t) {
      const double e = std::exp(-t);
      if (e == 0.0) return 0.0;
      const cplx r = std::pow(t, alpha - 1.0) * e / (1.0 - z * e);
      return imag ? r.imag() : r.real();
    };
  };
  const double split = std::abs(z) > 1.0 ? std::log(std::abs(z)) : 0.0;
  auto integrate = [&](bool imag) {
    const auto f = part(imag);
    double v = quad::tanh_sinh(f, split, split + 1.0, tol).value + quad::to_infinity(f, split + 1.0, tol).value;
    if (split > 0.0) v += quad::tanh_sinh(f, 0.0, split, tol).value;
    return v;
  };
  const cplx I = z * cplx(integrate(false), integrate(true));
  return I / std::tgamma(alpha);
}

// Li_0 = z/(1 - z); the series for |z| <= 0.5, the integral otherwise.
inline cplx polylog(double alpha, cplx z) {
  detail::require_polylog_domain(alpha, z);
  if (alpha == 0.0) return z / (1.0 - z);
  if (std::abs(z) <= 0.5) return polylog_series(alpha, z);
  return polylog_integral(alpha, z);
}

}  // namespace pickfn

#endif  // PICKFN_POLYLOG_HPP
