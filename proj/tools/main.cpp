#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

void add_common(CLI::App* app, pickfn::cli::Options& o) {
  app->add_option("--tol-abs", o.tol_abs, "absolute quadrature tolerance")->capture_default_str();
  app->add_option("--tol-rel", o.tol_rel, "relative quadrature tolerance")->capture_default_str();
  app->add_option("--grid", o.grid, "abscissa grid lo:hi:n");
  app->add_option("--out", o.out, "write the report to this file instead of stdout");
  app->add_option("--seed", o.seed, "seed for sampled checks")->capture_default_str();
  app->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using pickfn::cli::Options;
  Options o;
  CLI::App app{"Pick and log-Pick functions: evaluation, transforms, Hardy norms, universal starlikeness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PICKFN_VERSION);

  auto* eval = app.add_subcommand("eval", "evaluate f and phi = exp(f), or a primitive Pick function");
  eval->add_option("--nu", o.nu, "nu as JSON or a JSON file")->required();
  eval->add_option("--z", o.z, "points a+bi in the upper half-plane")->required();
  eval->add_option("--kind", o.kind, "plog or primitive")->capture_default_str();

  auto* transform = app.add_subcommand("transform", "Hilbert, Cauchy and Poisson transforms");
  transform->add_option("mode", o.mode, "hilbert|cauchy|poisson")->required()->check(
      CLI::IsMember({"hilbert", "cauchy", "poisson"}));
  transform->add_option("--density", o.density, "boundary density JSON (hilbert, cauchy)");
  transform->add_option("--nu", o.nu, "nu JSON (poisson)");
  transform->add_option("--x", o.x, "abscissae");
  transform->add_option("--y", o.y, "heights (poisson)");
  transform->add_option("--z", o.z, "points a+bi (cauchy)");

  auto* hardy = app.add_subcommand("hardy", "Hardy p-norms on horizontal lines");
  hardy->add_option("mode", o.mode, "norm|sweep|window (default sweep)")->check(
      CLI::IsMember({"norm", "sweep", "window"}));
  hardy->add_option("--nu", o.nu, "nu JSON with optional beta")->required();
  hardy->add_option("--p", o.p, "exponents");
  hardy->add_option("--y", o.y, "heights");

  auto* certify = app.add_subcommand("certify", "certify universal starlikeness of a candidate");
  certify->add_option("mode", o.mode, "mu|v|convex|callable-builtin (default mu)")->check(
      CLI::IsMember({"mu", "v", "convex", "callable-builtin"}));
  certify->add_option("--mu", o.mu, "probability measure on [0, 1]");
  certify->add_option("--density", o.density, "boundary density v");
  certify->add_option("--convex", o.convex, "{\"a\": 1, \"coeffs\": [c0, c1, c2], \"gamma\": 2}");
  certify->add_option("--builtin", o.builtin, "polylog:<alpha>, identity, koebe, pole");
  certify->add_option("--samples", o.samples, "boundary samples per disk")->capture_default_str();

  auto* identity = app.add_subcommand("identity-check", "compare L_mu with its nu-form");
  identity->add_option("--mu", o.mu, "probability measure on [0, 1]")->required();
  identity->add_option("--z", o.z, "points a+bi in the upper half-plane (default 0+1i)");

  for (auto* sub : {eval, transform, hardy, certify, identity}) add_common(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pickfn::cli::usage;
  }
  o.command = app.get_subcommands().front()->get_name();
  if (o.command == "certify" && o.mode.empty()) o.mode = "mu";

  pickfn::cli::Outcome out;
  try {
    o.max_radius = pickfn::cli::max_radius_from_env();
    out = pickfn::cli::run(o);
  } catch (const pickfn::io::UsageError& e) {
    std::cerr << "pickfn: " << e.what() << "\n";
    return pickfn::cli::usage;
  }
  const std::string text = pickfn::cli::render(out, o.format);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f || !(f << text)) {
      std::cerr << "pickfn: cannot write '" << o.out << "'\n";
      return pickfn::cli::usage;
    }
  }
  if (out.exit_code != 0) std::cerr << "pickfn: " << out.diagnostic << "\n";
  return out.exit_code;
}
