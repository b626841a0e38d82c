#ifndef PICKFN_MEASURE_HPP
#define PICKFN_MEASURE_HPP

// Finite Lebesgue-Stieltjes measures on the real line (atoms plus
// piecewise densities, the last piece possibly running to +inf) and the
// non-decreasing functions nu they generate.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pickfn/error.hpp"
#include "pickfn/quadrature.hpp"

namespace pickfn {

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

// A density on [lo, hi]; hi may be +inf for a tail descriptor.
class DensityPiece {
 public:
  enum class Kind { polynomial, exp_convex, mapped };

  // density = c0 + c1 t + c2 t^2 + c3 t^3 on the finite interval [lo, hi].
  static DensityPiece polynomial(double lo, double hi, std::vector<double> coeffs) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
      throw DomainError("polynomial piece needs a finite interval lo < hi");
    }
    if (coeffs.empty() || coeffs.size() > 4) {
      throw DomainError("polynomial piece takes 1 to 4 coefficients");
    }
    coeffs.resize(4, 0.0);
    DensityPiece p;
    p.kind_ = Kind::polynomial;
    p.lo_ = lo;
    p.hi_ = hi;
    p.params_ = coeffs;
    auto c = coeffs;
    p.density_ = [c](double t) { return c[0] + t * (c[1] + t * (c[2] + t * c[3])); };
    auto anti = [c](double t) {
      return t * (c[0] + t * (c[1] / 2.0 + t * (c[2] / 3.0 + t * c[3] / 4.0)));
    };
    p.cumulative_ = [anti, lo](double t) { return anti(t) - anti(lo); };
    p.mass_ = anti(hi) - anti(lo);
    p.survival_ = [anti, hi](double t) { return anti(hi) - anti(t); };

    // Exact minimum of a cubic on [lo, hi]: endpoints and critical points.
    std::vector<double> probes{lo, hi};
    const double a = 3.0 * c[3], b = 2.0 * c[2], cc = c[1];
    if (a != 0.0) {
      const double disc = b * b - 4.0 * a * cc;
      if (disc >= 0.0) {
        probes.push_back((-b + std::sqrt(disc)) / (2.0 * a));
        probes.push_back((-b - std::sqrt(disc)) / (2.0 * a));
      }
    } else if (b != 0.0) {
      probes.push_back(-cc / b);
    }
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    for (double t : probes) {
      if (t >= lo && t <= hi && p.density_(t) < -1e-14 * std::max(1.0, scale)) {
        throw DomainError("polynomial density is negative on its interval");
      }
    }
    return p;
  }

  // Tail density scale * exp(-(c0 + c1 t + c2 t^2)) on [from, +inf).
  // Convex exponent; requires c2 > 0, or c2 == 0 and c1 > 0.
  static DensityPiece exp_convex(double from, double c0, double c1, double c2, double scale = 1.0) {
    if (!std::isfinite(from)) throw DomainError("tail must start at a finite point");
    if (c2 < 0.0) throw DomainError("exp_convex tail: psi must be convex (c2 >= 0)");
    if (!(c2 > 0.0 || c1 > 0.0)) {
      throw DomainError("exp_convex tail: exp(-psi) is not integrable (need c2 > 0 or c1 > 0)");
    }
    if (!(scale > 0.0)) throw DomainError("exp_convex tail: scale must be positive");
    DensityPiece p;
    p.kind_ = Kind::exp_convex;
    p.lo_ = from;
    p.hi_ = kInf;
    p.params_ = {c0, c1, c2, scale};
    p.convex_ = true;
    p.density_ = [=](double t) { return scale * std::exp(-(c0 + t * (c1 + t * c2))); };
    std::function<double(double)> surv;
    if (c2 > 0.0) {
      const double m = -c1 / (2.0 * c2);
      const double shift = c0 - c1 * c1 / (4.0 * c2);
      const double k = std::sqrt(c2);
      surv = [=](double t) {
        const double u = k * (t - m);
        const double e = u >= 0.0 ? std::erfc(u) : 2.0 - std::erfc(-u);
        return scale * std::exp(-shift) * std::sqrt(kPi) / (2.0 * k) * e;
      };
    } else {
      surv = [=](double t) { return scale * std::exp(-(c0 + c1 * t)) / c1; };
    }
    p.survival_ = surv;
    p.mass_ = surv(from);
    p.cumulative_ = [surv, mass = p.mass_](double t) { return mass - surv(t); };
    return p;
  }

  // A density given by callables. `cumulative(t)` is the mass on [lo, t] and
  // `survival(t)` the mass on [t, hi].
  static DensityPiece mapped(double lo, double hi, std::function<double(double)> density,
                             std::function<double(double)> cumulative,
                             std::function<double(double)> survival, double mass) {
    if (!(std::isfinite(lo) && lo < hi)) throw DomainError("mapped piece needs lo < hi");
    if (!(mass >= 0.0 && std::isfinite(mass))) throw DomainError("mapped piece needs finite mass");
    DensityPiece p;
    p.kind_ = Kind::mapped;
    p.lo_ = lo;
    p.hi_ = hi;
    p.density_ = std::move(density);
    p.cumulative_ = std::move(cumulative);
    p.survival_ = std::move(survival);
    p.mass_ = mass;
    return p;
  }

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool is_tail() const { return std::isinf(hi_); }
  bool convex_certified() const { return convex_; }
  const std::vector<double>& params() const { return params_; }
  double mass() const { return mass_; }
  double density(double t) const { return density_(t); }
  // Mass on [lo, t], clamped to the piece.
  double cumulative(double t) const {
    if (t <= lo_) return 0.0;
    if (t >= hi_) return mass_;
    return cumulative_(t);
  }
  // Mass on [t, hi], clamped to the piece.
  double survival(double t) const {
    if (t <= lo_) return mass_;
    if (t >= hi_) return 0.0;
    return survival_(t);
  }
  bool contains(double t) const { return t >= lo_ && t <= hi_; }

 private:
  DensityPiece() = default;

  Kind kind_ = Kind::polynomial;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> params_;
  bool convex_ = false;
  double mass_ = 0.0;
  std::function<double(double)> density_;
  std::function<double(double)> cumulative_;
  std::function<double(double)> survival_;
};

// Where to split or treat an integrand specially when integrating against a
// measure.
struct IntegrationHints {
  std::vector<double> points;     // extra breakpoints (peaks of the integrand)
  std::optional<double> singular; // integrable singularity; uses tanh-sinh around it
};

class StieltjesMeasure {
 public:
  StieltjesMeasure() = default;

  StieltjesMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces)
      : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      if (!std::isfinite(atoms_[k].location)) throw DomainError("atom location must be finite");
      if (!(atoms_[k].mass > 0.0) || !std::isfinite(atoms_[k].mass)) {
        throw DomainError("atom masses must be strictly positive and finite");
      }
      if (k > 0 && !(atoms_[k].location > atoms_[k - 1].location)) {
        throw DomainError("atom locations must be strictly increasing");
      }
    }
    std::sort(pieces_.begin(), pieces_.end(),
              [](const DensityPiece& a, const DensityPiece& b) { return a.lo() < b.lo(); });
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      if (k + 1 < pieces_.size()) {
        if (pieces_[k].is_tail()) throw DomainError("only the last density piece may be unbounded");
        if (pieces_[k].hi() > pieces_[k + 1].lo()) throw DomainError("density pieces overlap");
      }
    }
  }

  static StieltjesMeasure from_atoms(std::vector<Atom> atoms) { return {std::move(atoms), {}}; }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  bool empty() const { return atoms_.empty() && pieces_.empty(); }

  double total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.mass;
    for (const auto& p : pieces_) m += p.mass();
    return m;
  }

  double sup_atom() const {
    double s = 0.0;
    for (const auto& a : atoms_) s = std::max(s, a.mass);
    return s;
  }

  double mass_at(double x) const {
    for (const auto& a : atoms_) {
      if (a.location == x) return a.mass;
    }
    return 0.0;
  }

  bool is_atom(double x) const { return mass_at(x) > 0.0; }

  // m((-inf, x)).
  double mass_below(double x) const {
    double m = 0.0;
    for (const auto& a : atoms_) {
      if (a.location < x) m += a.mass;
    }
    for (const auto& p : pieces_) m += p.cumulative(x);
    return m;
  }

  // m([x, +inf)) without cancellation against the total.
  double mass_from(double x) const {
    double m = 0.0;
    for (const auto& a : atoms_) {
      if (a.location >= x) m += a.mass;
    }
    for (const auto& p : pieces_) m += p.survival(x);
    return m;
  }

  // Number of support points, saturated at 2.
  bool support_has_two_points() const {
    int count = static_cast<int>(atoms_.size());
    for (const auto& p : pieces_) {
      if (p.mass() > 0.0) count += 2;
    }
    return count >= 2;
  }

  // Smallest and largest support point (largest may be +inf).
  std::pair<double, double> support_hull() const {
    double lo = kInf, hi = -kInf;
    for (const auto& a : atoms_) {
      lo = std::min(lo, a.location);
      hi = std::max(hi, a.location);
    }
    for (const auto& p : pieces_) {
      if (p.mass() <= 0.0) continue;
      lo = std::min(lo, p.lo());
      hi = std::max(hi, p.hi());
    }
    return {lo, hi};
  }

  // Atom locations and finite piece endpoints, sorted and deduplicated.
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (const auto& a : atoms_) b.push_back(a.location);
    for (const auto& p : pieces_) {
      b.push_back(p.lo());
      if (!p.is_tail()) b.push_back(p.hi());
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }

  // Integral of g over [from, to] against the measure (atoms at the end
  // points included).
  template <class G>
  auto integrate(G&& g, const IntegrationHints& hints = {}, const quad::Tolerance& tol = {},
                 double from = -kInf, double to = kInf) const
      -> quad::Result<std::decay_t<decltype(g(0.0))>> {
    using T = std::decay_t<decltype(g(0.0))>;
    quad::Result<T> out;
    for (const auto& a : atoms_) {
      if (a.location >= from && a.location <= to) out.value += a.mass * g(a.location);
    }
    for (const auto& p : pieces_) {
      const double lo = std::max(p.lo(), from);
      const double hi = std::min(p.hi(), to);
      if (!(hi > lo)) continue;
      auto f = [&](double t) -> T { return g(t) * p.density(t); };
      auto part = integrate_piece(f, lo, hi, hints, tol);
      out.value += part.value;
      out.error += part.error;
    }
    return out;
  }

  template <class F>
  static auto integrate_piece(F&& f, double lo, double hi, const IntegrationHints& hints,
                              const quad::Tolerance& tol)
      -> quad::Result<std::decay_t<decltype(f(0.0))>> {
    using T = std::decay_t<decltype(f(0.0))>;
    quad::Result<T> out;
    auto add = [&](const quad::Result<T>& r) {
      out.value += r.value;
      out.error += r.error;
    };
    std::vector<double> cuts;
    for (double h : hints.points) {
      if (h > lo && h < hi) cuts.push_back(h);
    }
    double finite_hi = hi;
    if (std::isinf(hi)) {
      double top = lo;
      for (double c : cuts) top = std::max(top, c);
      if (hints.singular && *hints.singular > lo) top = std::max(top, *hints.singular);
      finite_hi = top > lo ? top + 1.0 + std::abs(top) : lo;
    }
    const double w = std::min(1.0, finite_hi - lo);
    if (hints.singular && *hints.singular > lo - w && *hints.singular < finite_hi + w) {
      // Isolate the singular point, or the piece end nearest to it, in a small
      // window handled by tanh-sinh.
      const double a = std::max(lo, *hints.singular - w), b = std::min(finite_hi, *hints.singular + w);
      const double s = std::clamp(*hints.singular, a, b);
      if (a < s) add(quad::tanh_sinh(f, a, s, tol));
      if (s < b) add(quad::tanh_sinh(f, s, b, tol));
      if (lo < a) add(quad::integrate(f, lo, a, cuts, tol));
      if (b < finite_hi) add(quad::integrate(f, b, finite_hi, cuts, tol));
    } else if (finite_hi > lo) {
      add(quad::integrate(f, lo, finite_hi, cuts, tol));
    }
    if (std::isinf(hi)) add(quad::to_infinity(f, finite_hi, tol));
    return out;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
};

// Structural equality: same atoms within 1e-12 and same piece descriptors.
inline bool structurally_equal(const StieltjesMeasure& a, const StieltjesMeasure& b) {
  if (a.atoms().size() != b.atoms().size() || a.pieces().size() != b.pieces().size()) return false;
  for (std::size_t k = 0; k < a.atoms().size(); ++k) {
    if (std::abs(a.atoms()[k].location - b.atoms()[k].location) > 1e-12 ||
        std::abs(a.atoms()[k].mass - b.atoms()[k].mass) > 1e-12) {
      return false;
    }
  }
  for (std::size_t k = 0; k < a.pieces().size(); ++k) {
    const auto& p = a.pieces()[k];
    const auto& q = b.pieces()[k];
    if (p.kind() != q.kind() || p.kind() == DensityPiece::Kind::mapped) return false;
    if (p.lo() != q.lo() || p.hi() != q.hi() || p.params() != q.params()) return false;
  }
  return true;
}

inline double total_mass(const StieltjesMeasure& m) { return m.total_mass(); }
inline double sup_atom(const StieltjesMeasure& m) { return m.sup_atom(); }
inline bool support_count_at_least_two(const StieltjesMeasure& m) { return m.support_has_two_points(); }

// nu(x) = baseline + m((-inf, x)) + m({x})/2.
class NuFunction {
 public:
  NuFunction() = default;
  NuFunction(double baseline, StieltjesMeasure measure)
      : baseline_(baseline), measure_(std::move(measure)) {
    if (!(baseline_ >= 0.0) || !std::isfinite(baseline_)) {
      throw DomainError("nu baseline must be finite and non-negative");
    }
  }

  static NuFunction heaviside(double at, double jump = 1.0) {
    return {0.0, StieltjesMeasure::from_atoms({{at, jump}})};
  }
  static NuFunction constant(double value) { return {value, {}}; }

  double baseline() const { return baseline_; }
  const StieltjesMeasure& measure() const { return measure_; }
  double at_infinity() const { return baseline_ + measure_.total_mass(); }

  double cdf(double x) const {
    return baseline_ + measure_.mass_below(x) + 0.5 * measure_.mass_at(x);
  }
  double operator()(double x) const { return cdf(x); }

  // Range check used by the log-Pick classes.
  bool bounded_by_one() const { return at_infinity() <= 1.0 + 1e-12; }

 private:
  double baseline_ = 0.0;
  StieltjesMeasure measure_;
};

inline double cdf(const NuFunction& n, double x) { return n.cdf(x); }

// Integral over [from, to] of g(t) * nu(t) dt, given an antiderivative G of g
// that accepts +-inf. Constant stretches of nu use G exactly, density pieces
// use quadrature of g * nu, and a tail piece is integrated as
// nu(inf) (G(inf) - G(a)) - int_a^inf g (nu(inf) - nu).
template <class G, class AntiG>
auto integrate_times_nu(const NuFunction& n, G&& g, AntiG&& anti, double from, double to,
                        const IntegrationHints& hints = {}, const quad::Tolerance& tol = {})
    -> quad::Result<std::decay_t<decltype(g(0.0))>> {
  using T = std::decay_t<decltype(g(0.0))>;
  const auto& m = n.measure();
  std::vector<double> cuts{from};
  for (double b : m.breakpoints()) {
    if (b > from && b < to) cuts.push_back(b);
  }
  cuts.push_back(to);
  quad::Result<T> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (!(b > a)) continue;
    double probe;
    if (std::isinf(a) && std::isinf(b)) probe = 0.0;
    else if (std::isinf(a)) probe = b - 1.0;
    else if (std::isinf(b)) probe = a + 1.0;
    else probe = 0.5 * (a + b);
    const DensityPiece* piece = nullptr;
    for (const auto& p : m.pieces()) {
      if (p.mass() > 0.0 && probe > p.lo() && probe < p.hi()) piece = &p;
    }
    if (piece == nullptr) {
      const double c = n.cdf(probe);
      if (c != 0.0) out.value += c * (anti(b) - anti(a));
      continue;
    }
    if (std::isfinite(b)) {
      auto f = [&](double t) -> T { return g(t) * n.cdf(t); };
      auto r = StieltjesMeasure::integrate_piece(f, a, b, hints, tol);
      out.value += r.value;
      out.error += r.error;
    } else {
      const double top = n.at_infinity();
      auto f = [&](double t) -> T { return g(t) * m.mass_from(t); };
      auto r = StieltjesMeasure::integrate_piece(f, a, b, hints, tol);
      out.value += top * (anti(b) - anti(a)) - r.value;
      out.error += r.error;
    }
  }
  return out;
}

struct TailReport {
  double integral_nu_over_t2 = 0.0;
  double integral_dnu_over_t = 0.0;
  double nu_over_t_limit_estimate = 0.0;
  double probe_radius = 0.0;
};

inline TailReport tail_conditions(const NuFunction& n, const quad::Tolerance& tol = {}) {
  TailReport r;
  auto g = [](double t) { return 1.0 / (t * t); };
  auto anti = [](double t) { return std::isinf(t) ? 0.0 : -1.0 / t; };
  r.integral_nu_over_t2 = integrate_times_nu(n, g, anti, 1.0, kInf, {}, tol).value;
  r.integral_dnu_over_t =
      n.measure().integrate([](double t) { return 1.0 / t; }, {}, tol, 1.0, kInf).value;
  double reach = 1.0;
  for (double b : n.measure().breakpoints()) reach = std::max(reach, std::abs(b));
  r.probe_radius = 1e8 * reach;
  r.nu_over_t_limit_estimate = n.cdf(r.probe_radius) / r.probe_radius;
  if (!std::isfinite(r.integral_nu_over_t2) || !std::isfinite(r.integral_dnu_over_t)) {
    throw ConvergenceError("tail integrals diverge", kInf);
  }
  return r;
}

// nu(t) = 1 - mu(1/t) on [1, inf), 0 below 1, for a probability measure mu on
// [0, 1]. An atom of mu at 0 is dropped.
inline NuFunction nu_from_mu_unit(const StieltjesMeasure& mu) {
  for (const auto& a : mu.atoms()) {
    if (a.location < 0.0 || a.location > 1.0) throw DomainError("mu must be supported in [0, 1]");
  }
  for (const auto& p : mu.pieces()) {
    if (p.lo() < 0.0 || p.hi() > 1.0) throw DomainError("mu must be supported in [0, 1]");
  }
  if (std::abs(mu.total_mass() - 1.0) > 1e-12) throw DomainError("mu must have total mass 1");

  std::vector<Atom> atoms;
  for (auto it = mu.atoms().rbegin(); it != mu.atoms().rend(); ++it) {
    if (it->location > 0.0) atoms.push_back({1.0 / it->location, it->mass});
  }
  std::vector<DensityPiece> pieces;
  for (const auto& p : mu.pieces()) {
    if (p.mass() <= 0.0) continue;
    const double lo = 1.0 / p.hi();
    const double hi = p.lo() > 0.0 ? 1.0 / p.lo() : kInf;
    auto density = [p](double t) { return p.density(1.0 / t) / (t * t); };
    auto cumulative = [p](double t) { return p.survival(1.0 / t); };
    auto survival = [p](double t) { return p.cumulative(1.0 / t); };
    pieces.push_back(DensityPiece::mapped(lo, hi, density, cumulative, survival, p.mass()));
  }
  return {0.0, StieltjesMeasure(std::move(atoms), std::move(pieces))};
}

}  // namespace pickfn

#endif  // PICKFN_MEASURE_HPP
