#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "atorus/harness.hpp"

namespace atorus {

namespace {

Mollifier mollifier_of(const RunConfig& c) { return c.zero_noise ? zero_mollifier() : mollifier_by_id(c.mollifier); }

C2Mode c2_of(const RunConfig& c) { return c.c2_mode == "signed" ? C2Mode::signed_dot : C2Mode::absolute; }

Formulation form_of(const RunConfig& c) {
  return c.formulation == "printed" ? Formulation::as_printed : Formulation::consistent;
}

EnhancedNoise2D noise2d(const RunConfig& c, double eps, const Mollifier& m) {
  return enhance_2d(c.seed, eps, m, c.spec(), c.alpha);
}

EnhancedNoise3D noise3d(const RunConfig& c, double eps, const Mollifier& m) {
  return enhance_3d(c.seed, eps, m, c.spec(), c2_of(c), c.alpha);
}

Hamiltonian hamiltonian(const RunConfig& c, double eps, const Mollifier& m) {
  bool dense = c.spec().size() <= kMaxDenseRows;
  if (c.dim == 2) {
    auto n = noise2d(c, eps, m);
    return Hamiltonian(n.xi, n.c_eps, dense);
  }
  auto n = noise3d(c, eps, m);
  return Hamiltonian(n.xi, n.c1 + n.c2, dense);
}

bool is_wave(const EvolutionConfig& e) { return e.equation == Equation::wave || e.equation == Equation::linear_wave; }

Field initial_data(const RunConfig& c, std::uint64_t seed, bool real) {
  Field u = consistent_field(c.spec(), c.data_s, seed);
  double m = lp_norm(u, kInf);
  if (m > 0) u *= c.data_amp / m;
  u.reality = real;
  return u;
}

std::vector<std::string> row_of(std::initializer_list<double> xs) {
  std::vector<std::string> r;
  for (double x : xs) r.push_back(fmt(x));
  return r;
}

void log(const CommandOptions& o, const std::string& s) {
  if (!o.quiet) std::cerr << s << "\n";
}

// max lambda_max over the rungs, built one at a time, plus the margin
double common_shift(const std::vector<std::function<Hamiltonian()>>& hs, double margin) {
  double K = -kInf;
  for (const auto& make : hs) K = std::max(K, make().lambda_max());
  return K + margin;
}

}  // namespace

CommandResult cmd_noise(const RunConfig& cfg, const CommandOptions& o) {
  cfg.validate();
  RunDir rd(cfg, "noise");
  if (!o.force && rd.complete()) return {rd.root(), true, {}};
  Mollifier m = mollifier_of(cfg);
  const std::size_t R = cfg.eps.size();

  std::vector<std::shared_ptr<EnhancedNoise2D>> n2(R);
  std::vector<std::shared_ptr<EnhancedNoise3D>> n3(R);
  std::vector<double> direct_a(R), direct_b(R);
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> g(mu);
        if (next >= R) return;
        i = next++;
      }
      if (cfg.dim == 2) {
        n2[i] = std::make_shared<EnhancedNoise2D>(noise2d(cfg, cfg.eps[i], m));
        direct_a[i] = renorm_const_2d(cfg.eps[i], m, cfg.K);
      } else {
        n3[i] = std::make_shared<EnhancedNoise3D>(noise3d(cfg, cfg.eps[i], m));
        direct_a[i] = renorm_c1_3d(cfg.eps[i], m, cfg.K);
        direct_b[i] = renorm_c2_3d(cfg.eps[i], m, cfg.K, c2_of(cfg));
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::min<int>(cfg.workers, int(R)); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CsvTable renorm, ladder;
  if (cfg.dim == 2) {
    renorm.header = {"eps", "c_eps", "c_eps_direct", "truncated", "norm_xi", "norm_Xi2"};
    ladder.header = {"eps_a", "eps_b", "d_xi", "d_Xi2"};
  } else {
    renorm.header = {"eps", "c1", "c2", "c1_direct", "c2_direct", "truncated", "norm_xi", "norm_Z"};
    ladder.header = {"eps_a", "eps_b", "d_xi", "d_Z"};
  }
  for (std::size_t i = 0; i < R; ++i) {
    if (cfg.dim == 2) {
      const auto& n = *n2[i];
      renorm.add(row_of({cfg.eps[i], n.c_eps, direct_a[i], double(n.truncated), n.norm_xi, n.norm_Xi2}));
      rd.save_field("xi_" + std::to_string(i) + ".snap", n.xi);
      if (n.truncated) rd.warn("mollifier truncated by the lattice at eps = " + fmt(cfg.eps[i]));
    } else {
      const auto& n = *n3[i];
      renorm.add(row_of({cfg.eps[i], n.c1, n.c2, direct_a[i], direct_b[i], double(n.truncated), n.norms[0], n.norms[5]}));
      rd.save_field("xi_" + std::to_string(i) + ".snap", n.xi);
      if (n.truncated) rd.warn("mollifier truncated by the lattice at eps = " + fmt(cfg.eps[i]));
    }
  }
  for (std::size_t i = 0; i + 1 < R; ++i) {
    double a, b;
    if (cfg.dim == 2) {
      a = holder_norm(n2[i]->xi - n2[i + 1]->xi, cfg.alpha);
      b = holder_norm(n2[i]->Xi2 - n2[i + 1]->Xi2, 2 * cfg.alpha + 2);
    } else {
      a = holder_norm(n3[i]->xi - n3[i + 1]->xi, cfg.alpha - 2);
      b = holder_norm(n3[i]->Z - n3[i + 1]->Z, 2 * cfg.alpha - 1);
    }
    ladder.add(row_of({cfg.eps[i], cfg.eps[i + 1], a, b}));
  }
  rd.save_table("renorm.csv", renorm);
  rd.save_table("ladder.csv", ladder);
  rd.results() = {{"rungs", R}};
  rd.finish();
  log(o, "noise: " + rd.root().string());
  return {rd.root(), false, rd.results()};
}

CommandResult cmd_operator(const RunConfig& cfg, const CommandOptions& o) {
  cfg.validate();
  RunDir rd(cfg, "operator");
  if (!o.force && rd.complete()) return {rd.root(), true, {}};
  Mollifier m = mollifier_of(cfg);
  const TorusSpec s = cfg.spec();
  BundleOptions bo;
  bo.margin = cfg.margin;
  bo.target = cfg.target;
  bo.N_override = cfg.N;
  bo.form = form_of(cfg);
  const double eps = cfg.eps.back();

  Hamiltonian ham;
  json res;
  if (cfg.dim == 2) {
    OperatorBundle2D b = shift_and_bundle(noise2d(cfg, eps, m), bo);
    ham = b.ham;
    res = {{"N", b.N}, {"lambda_max", b.lambda_max}, {"K_Xi", b.K_Xi()}, {"contraction", b.pc->contraction()}};
  } else {
    OperatorBundle3D b = shift_and_bundle_3d(noise3d(cfg, eps, m), bo);
    ham = b.ham;
    res = {{"N", b.N}, {"lambda_max", b.lambda_max}, {"K_Xi", b.K_Xi()}, {"contraction", b.pc->contraction()}};
  }
  log(o, "operator: bundle built, N = " + std::to_string(res["N"].get<int>()));

  if (ham.dense()) {
    ham.ensure_spectrum();
    CsvTable sp;
    sp.header = {"index", "lambda_A", "lambda_H"};
    const RVec& ev = ham.matrix().eigenvalues();
    for (std::size_t i = ev.size(); i-- > 0;) sp.add(row_of({double(ev.size() - 1 - i), ev[i], ev[i] - ham.K_Xi}));
    rd.save_table("spectrum.csv", sp);
  } else {
    rd.warn("matrix-free bundle: spectrum dump skipped");
  }

  std::vector<Field> fs, us;
  for (int j = 0; j < cfg.samples; ++j) fs.push_back(consistent_field(s, 0.0, 1000 + j));
  if (cfg.eps.size() >= 2) {
    LadderTable lt;
    if (cfg.dim == 2) {
      std::vector<std::shared_ptr<const EnhancedNoise2D>> rungs;
      for (double e : cfg.eps) rungs.push_back(std::make_shared<const EnhancedNoise2D>(noise2d(cfg, e, m)));
      lt = resolvent_ladder(rungs, fs, cfg.gamma, cfg.margin);
    } else {
      std::vector<std::shared_ptr<const EnhancedNoise3D>> rungs;
      for (double e : cfg.eps) rungs.push_back(std::make_shared<const EnhancedNoise3D>(noise3d(cfg, e, m)));
      lt = resolvent_ladder_3d(rungs, fs, cfg.beta, cfg.margin);
    }
    CsvTable t;
    t.header = {"sample"};
    for (std::size_t i = 0; i + 1 < cfg.eps.size(); ++i) t.header.push_back("d" + std::to_string(i));
    t.header.push_back("inversions");
    t.header.push_back("monotone");
    int pass = 0;
    for (std::size_t j = 0; j < lt.diff.size(); ++j) {
      std::vector<std::string> r{std::to_string(j)};
      for (double d : lt.diff[j]) r.push_back(fmt(d));
      r.push_back(std::to_string(lt.inversions[j]));
      bool ok = lt.inversions[j] <= 1;
      pass += ok;
      r.push_back(ok ? "pass" : "fail");
      t.add(r);
    }
    rd.save_table("resolvent_ladder.csv", t);
    res["ladder_K_Xi"] = lt.K_Xi;
    res["ladder_pass"] = pass;
    res["ladder_samples"] = lt.diff.size();
  }

  for (int j = 0; j < cfg.samples; ++j) us.push_back(ham.resolvent(fs[j], ham.dense() ? Hamiltonian::Route::matrix
                                                                                     : Hamiltonian::Route::iterative));
  IneqReport ir = functional_ineq_report(ham, us);
  CsvTable iq;
  iq.header = {"quantity", "max"};
  iq.add({"brezis_gallouet", fmt(ir.max_bg)});
  iq.add({"l4_over_energy", fmt(ir.max_l4)});
  iq.add({"l6_over_energy", fmt(ir.max_l6)});
  iq.add({"linf_over_H", fmt(ir.max_linf_h)});
  if (cfg.dim == 3) {
    double ag = 0;
    for (const Field& u : us) ag = std::max(ag, agmon_ratio(ham, u));
    iq.add({"agmon", fmt(ag)});
  }
  rd.save_table("inequalities.csv", iq);
  rd.results() = res;
  rd.finish();
  log(o, "operator: " + rd.root().string());
  return {rd.root(), false, res};
}

CommandResult cmd_solve(const RunConfig& cfg, const CommandOptions& o) {
  cfg.validate();
  RunDir rd(cfg, o.order_test ? "solve-order" : "solve");
  if (!o.force && rd.complete()) return {rd.root(), true, {}};
  Hamiltonian h = hamiltonian(cfg, cfg.eps.front(), mollifier_of(cfg));
  h.K_Xi = h.lambda_max() + cfg.margin;
  SpectralPropagator P(h);
  const bool wave = is_wave(cfg.evolution);
  Field u0 = initial_data(cfg, cfg.data_seed, wave), u1 = initial_data(cfg, cfg.data_seed + 1, true);
  if (cfg.data_mode == "domain") {
    // (-H)^{-1} f: data in the operator domain, rescaled to the requested size
    u0 = h.resolvent(u0, h.dense() ? Hamiltonian::Route::matrix : Hamiltonian::Route::iterative);
    double m = lp_norm(u0, kInf);
    if (m > 0) u0 *= cfg.data_amp / m;
    u0.reality = wave;
  }
  auto run = [&](const EvolutionConfig& e) { return wave ? wave_solve(P, u0, u1, e) : nls_solve(P, u0, e); };

  json res{{"K_Xi", h.K_Xi}};
  EvolutionTrace tr = run(cfg.evolution);
  {
    std::ostringstream os;
    write_trace_csv(os, tr);
    std::istringstream is(os.str());
    rd.save_table("trace.csv", read_csv(is));
  }
  for (std::size_t i = 0; i < tr.u.size(); ++i) rd.save_field("u_" + std::to_string(i) + ".snap", tr.u[i]);
  double m0 = tr.mass.front(), E0 = tr.energy.front(), dm = 0, dE = 0;
  for (double x : tr.mass) dm = std::max(dm, std::abs(x - m0) / m0);
  for (double x : tr.energy) dE = std::max(dE, std::abs(x - E0));
  res["energy_drift"] = dE;
  if (!wave) {
    res["mass_drift_rel"] = dm;
    AprioriReport a = nls_domain_apriori_check(tr, E0);
    res["domain_envelope_ratio"] = a.max_ratio;
    res["domain_envelope_ok"] = a.ok;
  }
  if (!tr.u.empty()) {
    AprioriReport a = energy_apriori_check(tr, P);
    res["sup_mass_ratio"] = a.sup_mass_ratio;
    res["sup_energy_ratio"] = a.sup_energy_ratio;
    res["holder_half"] = a.holder_half;
  }

  if (o.order_test) {
    CsvTable t;
    t.header = {"dt", "energy_drift", "tilde_residual"};
    std::vector<double> dts, drift, tres;
    std::vector<EvolutionConfig> es;
    for (int k = 0; k < 4; ++k) {
      EvolutionConfig e = cfg.evolution;
      e.dt = cfg.evolution.dt / double(1 << k);
      e.record_every = std::max(1, int(std::lround(0.01 / e.dt)));
      e.keep_snapshots = false;
      e.snapshot_times.clear();
      es.push_back(e);
    }
    std::vector<EvolutionTrace> xs;
    if (wave)
      for (const auto& e : es) xs.push_back(run(e));
    else
      xs = nls_solve_batch(P, u0, es);
    for (std::size_t k = 0; k < es.size(); ++k) {
      const EvolutionTrace& x = xs[k];
      double d = 0;
      for (double v : x.energy) d = std::max(d, std::abs(v - x.energy.front()));
      double r = wave ? std::abs(x.tilde_energy.back() - x.tilde_rhs.back()) : std::nan("");
      dts.push_back(es[k].dt);
      drift.push_back(d);
      tres.push_back(r);
      t.add(row_of({es[k].dt, d, r}));
      log(o, "order test: dt = " + fmt(es[k].dt) + " drift = " + fmt(d));
    }
    rd.save_table("order.csv", t);
    double slope = loglog_slope(dts, drift);
    res["energy_slope"] = slope;
    res["energy_slope_ok"] = std::abs(slope - 2.0) <= 0.3;
    if (wave) {
      double ts = loglog_slope(dts, tres);
      res["tilde_slope"] = ts;
      res["tilde_slope_ok"] = std::abs(ts - 2.0) <= 0.3;
    }
  }
  rd.results() = res;
  rd.finish();
  log(o, "solve: " + rd.root().string());
  return {rd.root(), false, res};
}

CommandResult cmd_converge(const RunConfig& cfg, const CommandOptions& o) {
  cfg.validate();
  RunDir rd(cfg, "converge");
  if (!o.force && rd.complete()) return {rd.root(), true, {}};
  Mollifier m = mollifier_of(cfg);
  std::vector<double> eps = cfg.eps;
  std::function<Hamiltonian()> make_ref;
  if (cfg.reference == "identity") {
    Mollifier id = cfg.zero_noise ? zero_mollifier() : identity_mollifier();
    make_ref = [cfg, id] { return hamiltonian(cfg, 1.0, id); };
  } else {
    if (eps.size() < 2) throw ConfigError("converge: reference = finest needs two or more rungs");
    double fine = eps.back();
    eps.pop_back();
    make_ref = [cfg, fine, m] { return hamiltonian(cfg, fine, m); };
  }
  std::vector<std::function<Hamiltonian()>> rungs;
  for (double e : eps) rungs.push_back([cfg, e, m] { return hamiltonian(cfg, e, m); });
  auto all = rungs;
  all.push_back(make_ref);
  Hamiltonian ref = make_ref();
  ref.K_Xi = common_shift(all, cfg.margin);
  log(o, "converge: common K_Xi = " + fmt(ref.K_Xi));

  const bool wave = is_wave(cfg.evolution);
  Field u0 = initial_data(cfg, cfg.data_seed, wave), u1 = initial_data(cfg, cfg.data_seed + 1, true);
  PhiTable pt = convergence_experiment(ref, rungs, eps, u0, u1, cfg.evolution, cfg.times,
                                       cfg.data_mode == "energy" ? DataMode::energy : DataMode::domain);
  CsvTable t;
  t.header = {"eps"};
  for (double x : cfg.times) t.header.push_back("phi_t" + fmt(x));
  for (std::size_t r = 0; r < pt.phi.size(); ++r) {
    std::vector<std::string> row{fmt(pt.eps[r])};
    for (double v : pt.phi[r]) row.push_back(fmt(v));
    t.add(row);
  }
  rd.save_table("phi.csv", t);
  CsvTable v;
  v.header = {"t", "inversions", "decreasing"};
  bool all_dec = true;
  for (std::size_t i = 0; i < pt.times.size(); ++i) {
    bool dec = pt.inversions[i] == 0;
    all_dec = all_dec && dec;
    v.add({fmt(pt.times[i]), std::to_string(pt.inversions[i]), dec ? "pass" : "fail"});
  }
  rd.save_table("trend.csv", v);
  rd.results() = {{"K_Xi", ref.K_Xi}, {"decreasing", all_dec}};
  rd.finish();
  log(o, "converge: " + rd.root().string());
  return {rd.root(), false, rd.results()};
}

CommandResult cmd_check(const RunConfig& cfg, const CommandOptions& o) {
  cfg.validate();
  RunDir rd(cfg, "check");
  std::vector<std::string> names = o.suites.empty() ? check_suite_names() : o.suites;
  CsvTable t;
  t.header = {"suite", "result", "detail"};
  bool ok = true;
  for (const std::string& n : names) {
    SuiteResult r = run_check_suite(n, cfg);
    ok = ok && r.pass;
    t.add({n, r.pass ? "pass" : "fail", r.detail});
    if (!o.quiet) std::cout << (r.pass ? "PASS " : "FAIL ") << n << "  " << r.detail << "\n";
  }
  rd.save_table("checks.csv", t);
  rd.results() = {{"all_pass", ok}};
  rd.finish();
  if (!ok) throw CheckFailed("check: one or more suites failed (see " + rd.root().string() + ")");
  return {rd.root(), false, rd.results()};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const CheckFailed*>(&e)) return kExitCheck;
  if (dynamic_cast<const NumericalFailure*>(&e) || dynamic_cast<const NumericalError*>(&e) ||
      dynamic_cast<const std::overflow_error*>(&e))
    return kExitNumerical;
  if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e) ||
      dynamic_cast<const std::length_error*>(&e) || dynamic_cast<const json::exception*>(&e))
    return kExitValidation;
  return kExitNumerical;
}

}  // namespace atorus
