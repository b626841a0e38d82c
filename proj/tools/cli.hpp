#ifndef PICKFN_TOOLS_CLI_HPP
#define PICKFN_TOOLS_CLI_HPP

// Commands of the pickfn tool. Each command turns parsed options into a
// report; exit codes: 0 all verdicts pass, 1 a mathematical verdict failed,
// 2 usage or schema error, 3 numerical non-convergence.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"
#include "pickfn/hardy.hpp"
#include "pickfn/pick.hpp"
#include "pickfn/plog.hpp"
#include "pickfn/polylog.hpp"
#include "pickfn/starlike.hpp"
#include "pickfn/transforms.hpp"

#ifndef PICKFN_VERSION
#define PICKFN_VERSION "0.1.0"
#endif

namespace pickfn::cli {

using io::json;

enum Exit { ok = 0, verdict_failed = 1, usage = 2, no_convergence = 3 };

struct Options {
  std::string command;  // eval, transform, hardy, certify, identity-check
  std::string mode;     // transform: hilbert|cauchy|poisson; hardy: norm|sweep|window; certify: mu|v|convex|callable-builtin
  std::string mu, nu, density, convex, builtin;
  std::string kind = "plog";  // eval: plog|primitive
  std::vector<std::string> z;
  std::vector<double> x, p, y;
  std::string grid;
  double tol_abs = 1e-10;
  double tol_rel = 1e-8;
  std::uint64_t seed = 20250101;
  std::string format = "json";
  std::string out;
  std::optional<double> max_radius;  // from HS_MAX_RADIUS
  int samples = 256;
};

struct Outcome {
  int exit_code = ok;
  json report;
  json rows = json::array();
  std::string diagnostic;  // one line for stderr when exit_code != 0
};

// Positive number from HS_MAX_RADIUS, or nothing when unset.
inline std::optional<double> max_radius_from_env() {
  const char* s = std::getenv("HS_MAX_RADIUS");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const double r = std::strtod(s, &end);
  if (*end != '\0' || !(r > 1.0) || !std::isfinite(r)) {
    throw io::UsageError(std::string("HS_MAX_RADIUS must be a number > 1, got '") + s + "'");
  }
  return r;
}

namespace detail {

inline quad::Tolerance tolerance(const Options& o) { return {o.tol_abs, o.tol_rel}; }

inline double radius_cap(const Options& o) { return o.max_radius.value_or(1048576.0); }

inline LineSpec line_spec(const Options& o) {
  LineSpec s;
  s.abs_tol = o.tol_abs;
  s.rel_tol = o.tol_rel;
  s.radius_cap = radius_cap(o);
  return s;
}

inline PVQuadSpec pv_spec(const Options& o) {
  PVQuadSpec q;
  q.abs_tol = o.tol_abs;
  q.rel_tol = o.tol_rel;
  q.radius_cap = radius_cap(o);
  return q;
}

inline const std::string& require(const std::string& value, const char* flag) {
  if (value.empty()) throw io::UsageError(std::string("missing ") + flag);
  return value;
}

inline std::vector<cplx> points(const Options& o, std::vector<std::string> fallback = {}) {
  std::vector<cplx> zs;
  for (const auto& s : o.z.empty() ? fallback : o.z) zs.push_back(io::parse_complex(s));
  if (zs.empty()) throw io::UsageError("missing --z");
  return zs;
}

inline std::vector<double> abscissae(const Options& o) {
  std::vector<double> xs = o.x;
  if (!o.grid.empty()) {
    const auto g = io::parse_grid(o.grid);
    xs.insert(xs.end(), g.begin(), g.end());
  }
  if (xs.empty()) throw io::UsageError("missing --x or --grid");
  return xs;
}

inline std::vector<double> values(const std::vector<double>& v, const char* flag) {
  if (v.empty()) throw io::UsageError(std::string("missing ") + flag);
  return v;
}

// Runs `f` on one row; a convergence failure marks the row instead of aborting.
template <class F>
json guarded_row(json row, F&& f, bool& all_converged) {
  try {
    f(row);
    if (!row.contains("converged")) row["converged"] = true;
  } catch (const ConvergenceError& e) {
    row["converged"] = false;
    row["failure"] = e.what();
  }
  if (!row["converged"].get<bool>()) all_converged = false;
  return row;
}

inline Outcome finish_convergence(Outcome out, bool all_converged, const std::string& what) {
  if (!all_converged) {
    out.exit_code = no_convergence;
    out.diagnostic = what + ": numerical non-convergence (see report)";
  }
  return out;
}

inline Outcome run_eval(const Options& o) {
  const auto in = io::load_json(require(o.nu, "--nu"));
  const auto zs = points(o);
  const auto tol = tolerance(o);
  Outcome out;
  bool all = true;
  if (o.kind == "primitive") {
    const auto P = io::parse_primitive(in);
    for (cplx z : zs) {
      out.rows.push_back(guarded_row({{"z", io::to_json(z)}}, [&](json& r) {
        r["Phi"] = io::to_json(eval_primitive(P, z, tol));
        r["derivative"] = io::to_json(derivative(P, z, tol));
      }, all));
    }
  } else if (o.kind == "plog") {
    const auto P = io::parse_plog(in);
    for (cplx z : zs) {
      out.rows.push_back(guarded_row({{"z", io::to_json(z)}}, [&](json& r) {
        const cplx f = eval_f(P.log_part, z, tol);
        r["f"] = io::to_json(f);
        r["phi"] = io::to_json(std::exp(f));
      }, all));
    }
  } else {
    throw io::UsageError("--kind must be plog or primitive");
  }
  return finish_convergence(std::move(out), all, "eval");
}

inline Outcome run_transform(const Options& o) {
  Outcome out;
  bool all = true;
  const auto tol = tolerance(o);
  if (o.mode == "hilbert") {
    const auto v = io::parse_density(io::load_json(require(o.density, "--density")), tol);
    for (double x : abscissae(o)) {
      out.rows.push_back(guarded_row({{"x", x}}, [&](json& r) { r["hilbert"] = hilbert_pv(v, x, pv_spec(o)); }, all));
    }
  } else if (o.mode == "cauchy") {
    const auto v = io::parse_density(io::load_json(require(o.density, "--density")), tol);
    for (cplx z : points(o)) {
      out.rows.push_back(guarded_row({{"z", io::to_json(z)}}, [&](json& r) {
        r["cauchy"] = io::to_json(cauchy_transform(v, z, pv_spec(o)));
      }, all));
    }
  } else if (o.mode == "poisson") {
    const auto P = io::parse_primitive(io::load_json(require(o.nu, "--nu")));
    for (double y : values(o.y, "--y")) {
      for (double x : abscissae(o)) {
        out.rows.push_back(guarded_row({{"x", x}, {"y", y}}, [&](json& r) {
          r["V"] = poisson_V(P.nu, P.alpha, x, y, tol);
          r["pi_nu"] = kPi * P.nu(x);
        }, all));
      }
    }
  } else {
    throw io::UsageError("transform needs hilbert, cauchy or poisson");
  }
  return finish_convergence(std::move(out), all, "transform " + o.mode);
}

inline json window_json(const PWindow& w) {
  return {{"lower", io::number(w.lower)}, {"upper", io::number(w.upper)}, {"degenerate", w.degenerate()}};
}

inline Outcome run_hardy(const Options& o) {
  const auto P = io::parse_plog(io::load_json(require(o.nu, "--nu")));
  Outcome out;
  const auto w = p_window(P.log_part.nu);
  out.report["window"] = window_json(w);
  if (o.mode == "window") {
    out.rows.push_back(window_json(w));
    return out;
  }
  const auto ps = values(o.p, "--p"), ys = values(o.y, "--y");
  auto spec = line_spec(o);
  bool all = true;
  if (o.mode == "norm") {
    spec.hints = P.log_part.nu.measure().breakpoints();
    for (double y : ys) {
      for (double p : ps) {
        const auto n = line_p_norm([&P](cplx z) { return eval_phi(P, z); }, p, y, spec);
        json r{{"p", p},
               {"y", y},
               {"value", io::number(n.value)},
               {"converged", n.converged},
               {"radius_diverging", n.diverging},
               {"radius", n.radius},
               {"in_window", w.contains(p)}};
        if (!n.converged) r["failure"] = n.failure;
        all = all && n.converged;
        out.rows.push_back(r);
      }
    }
  } else if (o.mode == "sweep" || o.mode.empty()) {
    const auto s = window_sweep(P, ps, ys, spec);
    for (const auto& e : s.entries) {
      json r{{"p", e.p},
             {"y", e.y},
             {"value", io::number(e.value)},
             {"converged", e.converged},
             {"radius_diverging", e.radius_diverging},
             {"refinement_diverging", e.refinement_diverging},
             {"radius", e.radius},
             {"in_window", w.contains(e.p)}};
      if (!e.failure.empty()) r["failure"] = e.failure;
      all = all && e.converged;
      out.rows.push_back(r);
    }
  } else {
    throw io::UsageError("hardy needs norm, sweep or window");
  }
  return finish_convergence(std::move(out), all, "hardy");
}

// Closed-form candidates selectable by name.
inline UniversalCandidate builtin_candidate(const std::string& name) {
  UniversalCandidate c;
  c.origin = name;
  if (name.rfind("polylog:", 0) == 0) {
    try {
      return polylog_candidate(std::stod(name.substr(8)));
    } catch (const std::invalid_argument&) {
      throw io::UsageError("polylog:<alpha> needs a number");
    }
  }
  if (name == "identity") {
    c.phi = [](cplx) { return cplx(1.0); };
  } else if (name == "koebe") {
    c.phi = [](cplx z) { return 1.0 / (1.0 - z); };
  } else if (name == "pole") {
    c.phi = [](cplx z) { return 1.0 / (1.0 + z); };
  } else {
    throw io::UsageError("unknown builtin '" + name + "' (polylog:<alpha>, identity, koebe, pole)");
  }
  return c;
}

inline json evidence_json(const CircularDomain& d, const StarlikeEvidence& e) {
  return {{"domain", d.kind() == CircularDomain::Kind::disk ? "disk" : "half-plane"},
          {"center", io::to_json(d.center())},
          {"radius", d.radius()},
          {"verdict", to_string(e.verdict)},
          {"min_turning", io::number(e.min_turning)},
          {"argmin_theta", e.argmin_theta},
          {"winding", e.winding},
          {"samples", e.samples}};
}

inline json certification_json(const CertificationReport& r) {
  json j{{"verdict", to_string(r.verdict)},
         {"failed_step", r.failed_step},
         {"detail", r.detail},
         {"phi0_error", r.phi0_error},
         {"holomorphy_exact", r.holomorphy_exact},
         {"holomorphy_residual", r.holomorphy_residual},
         {"holomorphy_x", r.holomorphy_x}};
  if (r.exceptional) j["exceptional"] = {{"theta", r.exceptional->theta}, {"a", io::number(r.exceptional->a)}};
  if (r.membership) {
    json crit = json::array();
    for (const auto& c : r.membership->criteria) {
      crit.push_back({{"pass", c.pass}, {"worst", c.worst}});
    }
    j["membership"] = {{"overall", to_string(r.membership->overall)},
                       {"criteria", crit},
                       {"pick_range", r.membership->pick_range},
                       {"points", r.membership->points_evaluated}};
  }
  return j;
}

inline Outcome run_certify(const Options& o) {
  Outcome out;
  UniversalCandidate c;
  std::string builder_failure;
  const auto tol = tolerance(o);
  if (o.mode == "mu") {
    try {
      c = build_from_mu(io::parse_measure(io::load_json(require(o.mu, "--mu"))), tol);
    } catch (const DomainError& e) {
      throw io::UsageError(std::string("invalid mu: ") + e.what());
    }
  } else if (o.mode == "v") {
    const auto v = io::parse_density(io::load_json(require(o.density, "--density")), tol);
    try {
      c = build_from_v(v, pv_spec(o), o.seed);
    } catch (const DomainError& e) {
      builder_failure = e.what();
    }
  } else if (o.mode == "convex") {
    const auto j = io::load_json(require(o.convex, "--convex"));
    const auto coeffs = io::detail::get<std::vector<double>>(j, "coeffs", "convex");
    if (coeffs.empty() || coeffs.size() > 3) throw io::UsageError("convex: \"coeffs\" holds 1 to 3 numbers");
    auto psi = [coeffs](double t) {
      double s = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 0;) s = s * t + coeffs[k];
      return s;
    };
    try {
      const auto b = build_from_convex(io::detail::get_or<double>(j, "a", 1.0, "convex"), psi,
                                       io::detail::get_or<double>(j, "gamma", 2.0, "convex"), pv_spec(o));
      c = b.candidate;
      out.report["b"] = b.b;
    } catch (const DomainError& e) {
      builder_failure = e.what();
    }
  } else if (o.mode == "callable-builtin") {
    c = builtin_candidate(require(o.builtin, "--builtin"));
  } else {
    throw io::UsageError("certify needs mu, v, convex or callable-builtin");
  }
  if (!builder_failure.empty()) {
    out.report["certification"] = {{"verdict", "rejected"}, {"failed_step", "admissibility"},
                                   {"detail", builder_failure}};
    out.exit_code = verdict_failed;
    out.diagnostic = "certify: " + builder_failure;
    return out;
  }
  const auto r = certify_universal(c);
  out.report["certification"] = certification_json(r);
  using V = CertificationReport::Verdict;
  if (r.verdict == V::rejected) {
    out.exit_code = verdict_failed;
    out.diagnostic = "certify: rejected at " + r.failed_step + ": " + r.detail;
    return out;
  }
  if (r.verdict == V::inconclusive) {
    out.exit_code = no_convergence;
    out.diagnostic = "certify: inconclusive: " + r.detail;
    return out;
  }
  // Geometric corroboration on the stated battery.
  bool pass = true, inconclusive = false;
  for (const auto& d : standard_battery()) {
    const auto e = starlike_image_check(c, d, static_cast<std::size_t>(o.samples));
    out.rows.push_back(evidence_json(d, e));
    pass = pass && e.verdict != StarlikeEvidence::Verdict::fail;
    inconclusive = inconclusive || e.verdict == StarlikeEvidence::Verdict::inconclusive;
  }
  if (!pass) {
    out.exit_code = verdict_failed;
    out.diagnostic = "certify: image of a battery disk is not starlike";
  } else if (inconclusive) {
    out.exit_code = no_convergence;
    out.diagnostic = "certify: a battery disk check was inconclusive";
  }
  return out;
}

inline Outcome run_identity_check(const Options& o) {
  StieltjesMeasure mu;
  try {
    mu = io::parse_measure(io::load_json(require(o.mu, "--mu")));
  } catch (const DomainError& e) {
    throw io::UsageError(std::string("invalid mu: ") + e.what());
  }
  constexpr double threshold = 1e-8;
  Outcome out;
  out.report["threshold"] = threshold;
  bool all = true, pass = true;
  for (cplx z : points(o, {"0+1i"})) {
    out.rows.push_back(guarded_row({{"z", io::to_json(z)}}, [&](json& r) {
      const auto c = l_mu_identity_check(mu, z, tolerance(o));
      r["lhs"] = io::to_json(c.lhs);
      r["rhs"] = io::to_json(c.rhs);
      r["residual"] = c.residual;
      r["pass"] = c.residual <= threshold;
      pass = pass && c.residual <= threshold;
    }, all));
  }
  if (!all) return finish_convergence(std::move(out), all, "identity-check");
  if (!pass) {
    out.exit_code = verdict_failed;
    out.diagnostic = "identity-check: residual exceeds 1e-8";
  }
  return out;
}

inline json job_echo(const Options& o) {
  json j{{"command", o.command}, {"seed", o.seed}, {"format", o.format}};
  auto put = [&j](const char* k, const std::string& v) {
    if (!v.empty()) j[k] = v;
  };
  put("mode", o.mode);
  put("mu", o.mu);
  put("nu", o.nu);
  put("density", o.density);
  put("convex", o.convex);
  put("builtin", o.builtin);
  put("grid", o.grid);
  if (o.command == "eval") j["kind"] = o.kind;
  if (!o.z.empty()) j["z"] = o.z;
  if (!o.x.empty()) j["x"] = o.x;
  if (!o.p.empty()) j["p"] = o.p;
  if (!o.y.empty()) j["y"] = o.y;
  if (o.command == "certify") j["samples"] = o.samples;
  return j;
}

}  // namespace detail

// Runs one job; never throws.
inline Outcome run(const Options& o) {
  Outcome out;
  try {
    if (!(o.tol_abs > 0.0) || !(o.tol_rel > 0.0)) throw io::UsageError("tolerances must be positive");
    if (o.format != "json" && o.format != "csv") throw io::UsageError("--format must be json or csv");
    if (o.samples < 256) throw io::UsageError("--samples must be at least 256");
    if (o.command == "eval") {
      out = detail::run_eval(o);
    } else if (o.command == "transform") {
      out = detail::run_transform(o);
    } else if (o.command == "hardy") {
      out = detail::run_hardy(o);
    } else if (o.command == "certify") {
      out = detail::run_certify(o);
    } else if (o.command == "identity-check") {
      out = detail::run_identity_check(o);
    } else {
      throw io::UsageError("unknown command '" + o.command + "'");
    }
  } catch (const io::UsageError& e) {
    out = {};
    out.exit_code = usage;
    out.diagnostic = e.what();
  } catch (const DomainError& e) {
    out = {};
    out.exit_code = usage;
    out.diagnostic = e.what();
  } catch (const ConvergenceError& e) {
    out.exit_code = no_convergence;
    out.diagnostic = e.what();
  } catch (const Error& e) {
    out.exit_code = no_convergence;
    out.diagnostic = e.what();
  }
  json report = out.report.is_object() ? out.report : json::object();
  report["tool"] = "pickfn";
  report["version"] = PICKFN_VERSION;
  report["job"] = detail::job_echo(o);
  report["tolerances"] = {{"abs", o.tol_abs}, {"rel", o.tol_rel}, {"max_radius", detail::radius_cap(o)}};
  report["results"] = out.rows;
  report["exit_code"] = out.exit_code;
  if (!out.diagnostic.empty()) report["diagnostic"] = out.diagnostic;
  out.report = std::move(report);
  return out;
}

inline std::string render(const Outcome& out, const std::string& format) {
  return format == "csv" ? io::to_csv(out.rows) : out.report.dump(2) + "\n";
}

}  // namespace pickfn::cli

#endif  // PICKFN_TOOLS_CLI_HPP
