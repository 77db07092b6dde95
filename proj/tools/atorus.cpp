// atorus: noise | operator | solve | converge | check
#include <iostream>

#include "CLI11.hpp"
#include "atorus/harness.hpp"

using namespace atorus;

int main(int argc, char** argv) {
  blas_runtime_guard(argc, argv);
  CLI::App app{"Anderson Hamiltonians on the torus: noise, operators, dispersive evolution"};
  app.require_subcommand(1);

  std::string config_path, eps_list, out;
  std::uint64_t seed = 0;
  int dim = 0, K = 0, workers = 0;
  bool allow = false, force = false, quiet = false, order = false;
  std::vector<std::string> suites;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--config", config_path, "JSON run configuration (a manifest.json also works)");
    sc->add_option("--seed", seed, "noise seed");
    sc->add_option("--eps", eps_list, "comma-separated eps ladder");
    sc->add_option("--dim", dim, "2 or 3");
    sc->add_option("--K", K, "lattice cutoff");
    sc->add_option("--workers", workers, "worker threads");
    sc->add_option("--out", out, "output root (default $ATORUS_OUT or ./runs)");
    sc->add_flag("--allow-out-of-range-exponents", allow);
    sc->add_flag("--force", force, "recompute even when a finished run directory exists");
    sc->add_flag("--quiet", quiet);
  };
  CLI::App* noise = app.add_subcommand("noise", "sample and enhance the noise along the eps ladder");
  CLI::App* op = app.add_subcommand("operator", "bundle, spectrum, resolvent ladder, inequalities");
  CLI::App* solve = app.add_subcommand("solve", "NLS or wave run with trace");
  CLI::App* conv = app.add_subcommand("converge", "solution convergence across the eps ladder");
  CLI::App* check = app.add_subcommand("check", "invariant suites");
  for (CLI::App* sc : {noise, op, solve, conv, check}) common(sc);
  solve->add_flag("--order-test", order, "dt sweep over three octaves, drift slope");
  check->add_option("--suite", suites, "suite name (repeatable)")->check(CLI::IsMember(check_suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    int d = dim ? dim : 2;
    RunConfig cfg = config_path.empty() ? RunConfig::defaults(d) : load_config(config_path);
    if (dim && dim != cfg.dim) {
      RunConfig base = RunConfig::defaults(dim);
      json j = cfg.to_json();
      j["torus"]["dim"] = dim;
      j["torus"]["K"] = base.K;
      j["exponents"]["alpha"] = base.alpha;
      j["exponents"]["gamma"] = base.gamma;
      j["exponents"]["beta"] = base.beta;
      cfg = RunConfig::from_json(j);
    }
    if (seed) cfg.seed = seed;
    if (!eps_list.empty()) cfg.eps = parse_list(eps_list);
    if (K) cfg.K = K;
    if (workers) cfg.workers = workers;
    if (!out.empty()) cfg.out_dir = out;
    if (allow) cfg.allow_out_of_range = true;

    CommandOptions o;
    o.force = force;
    o.quiet = quiet;
    o.order_test = order;
    o.suites = suites;
    CommandResult r;
    if (*noise)
      r = cmd_noise(cfg, o);
    else if (*op)
      r = cmd_operator(cfg, o);
    else if (*solve)
      r = cmd_solve(cfg, o);
    else if (*conv)
      r = cmd_converge(cfg, o);
    else
      r = cmd_check(cfg, o);
    std::cout << r.dir.string() << (r.cached ? " (cached)" : "") << "\n";
    if (!r.results.empty() && !quiet) std::cout << r.results.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "atorus: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
