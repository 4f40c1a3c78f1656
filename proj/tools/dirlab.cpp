#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "dirlab/experiment.hpp"

namespace {

// Flags given on the command line override the config file.
struct Flags {
  std::string config;
  double delta = 0.0;
  std::string eps, M, out, raw;
  int n = 0, order = 0, K = 0, nmax = 0, xi_grid = 0;
  std::int64_t pmax = 0;
  double rho = 0.0;
  bool plot = false;
};

void add_common(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config, "JSON config with the same field names as the flags");
  sub.add_option("--out", f.out, "output directory");
  sub.add_flag("--plot", f.plot, "also write SVG line plots");
}

void add_cusp(CLI::App& sub, Flags& f) {
  sub.add_option("--delta", f.delta, "disk scale delta in (0, 1/200]");
  sub.add_option("--eps", f.eps, "dyadic:n or file:path");
  sub.add_option("--n", f.n, "number of levels (default: length of eps)");
}

void add_eksy(CLI::App& sub, Flags& f) {
  sub.add_option("--M", f.M, "growth sequence: log2, const:k or file:path");
  sub.add_option("--nmax", f.nmax, "number of levels of the domain");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dirlab: certified numerics for composition operators on the Dirichlet space"};
  app.require_subcommand(1);
  Flags f;

  auto* gram = app.add_subcommand("cusp-gram", "Gram matrix certificate on the cusp instance");
  add_common(*gram, f);
  add_cusp(*gram, f);
  gram->add_option("--order", f.order, "disk quadrature order");

  auto* rho = app.add_subcommand("cusp-rho", "window measures of the cusp on h = delta^j");
  add_common(*rho, f);
  add_cusp(*rho, f);
  rho->add_option("--xi-grid", f.xi_grid, "equispaced boundary points added to the local grid");

  auto* gal = app.add_subcommand("cusp-galerkin", "monomial Galerkin compression of the Toeplitz operator");
  add_common(*gal, f);
  add_cusp(*gal, f);
  gal->add_option("--K", f.K, "number of monomials");

  auto* growth = app.add_subcommand("eksy-growth", "power norms on the box/tower/pipe domain");
  add_common(*growth, f);
  add_eksy(*growth, f);
  growth->add_option("--pmax", f.pmax, "largest power");

  auto* windows = app.add_subcommand("eksy-windows", "window measures on the box/tower/pipe domain");
  add_common(*windows, f);
  add_eksy(*windows, f);

  auto* seq = app.add_subcommand("seq-demo", "clamp and slow-decay regularization of a raw sequence");
  add_common(*seq, f);
  seq->add_option("--raw", f.raw, "harmonic or file:path");
  seq->add_option("--rho", f.rho, "decay ratio in (0, 1)");
  seq->add_option("--n", f.n, "length of the harmonic sequence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? dirlab::kExitOk : dirlab::kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto given = [sub](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };

  dirlab::ExperimentConfig c;
  try {
    if (given("--config")) c = dirlab::load_config(f.config);
    if (!c.experiment.empty() && c.experiment != sub->get_name())
      throw dirlab::ValidationError("config experiment '" + c.experiment + "' does not match subcommand '" +
                                    sub->get_name() + "'");
  } catch (const dirlab::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return dirlab::kExitUsage;
  }
  c.experiment = sub->get_name();
  if (given("--delta")) c.delta = f.delta;
  if (given("--eps")) c.eps = f.eps;
  if (given("--n")) c.n = f.n;
  if (given("--order")) c.order = f.order;
  if (given("--K")) c.K = f.K;
  if (given("--M")) c.M = f.M;
  if (given("--nmax")) c.nmax = f.nmax;
  if (given("--pmax")) c.pmax = f.pmax;
  if (given("--xi-grid")) c.xi_grid = f.xi_grid;
  if (given("--out")) c.out = f.out;
  if (given("--plot")) c.plot = true;
  if (given("--raw")) c.raw = f.raw;
  if (given("--rho")) c.rho = f.rho;

  std::string message;
  const int code = dirlab::run(c, &message);
  if (code == dirlab::kExitOk || code == dirlab::kExitCertificate)
    std::printf("%s: %s, artifacts in %s\n", c.experiment.c_str(), message.c_str(), c.out.c_str());
  else
    std::fprintf(stderr, "error: %s\n", message.c_str());
  return code;
}
