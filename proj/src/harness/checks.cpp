#include <cmath>
#include <random>
#include <sstream>

#include "atorus/harness.hpp"

namespace atorus {

namespace {

SuiteResult csv_roundtrip(const RunConfig& cfg) {
  std::mt19937_64 g(cfg.seed);
  std::normal_distribution<double> nd;
  CsvTable t;
  t.header = {"a", "b, quoted", "c"};
  for (int i = 0; i < 200; ++i) t.add({fmt(nd(g)), fmt(std::ldexp(nd(g), i % 60 - 30)), fmt(std::nan(""))});
  std::ostringstream os;
  write_csv(os, t);
  std::istringstream is(os.str());
  CsvTable r = read_csv(is);
  bool ok = r.header == t.header && r.rows == t.rows;
  for (std::size_t i = 0; ok && i < t.rows.size(); ++i) ok = r.num(i, "a") == t.num(i, "a");
  return {"csv-roundtrip", ok, std::to_string(t.rows.size()) + " rows"};
}

SuiteResult bony(const RunConfig& cfg) {
  auto s = TorusSpec::make(cfg.dim, cfg.dim == 2 ? 16 : 6);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    Field f = smooth_field(s, s.K / 2, cfg.seed * 101 + i), h = smooth_field(s, s.K / 2, cfg.seed * 103 + i);
    Field fg = product(f, h);
    worst = std::max(worst, (fg - para_lo(f, h) - resonant(f, h) - para_hi(f, h)).norm() / fg.norm());
  }
  return {"bony", worst <= 1e-10, "max rel " + fmt(worst)};
}

SuiteResult operator_consistency(const RunConfig& cfg) {
  double worst = 0;
  if (cfg.dim == 2) {
    auto s = TorusSpec::make(2, 12);
    auto n = std::make_shared<const EnhancedNoise2D>(enhance_2d(cfg.seed, 0.125, bump_mollifier(), s));
    Paracontrolled2D pc(n, choose_N(*n));
    for (int i = 0; i < 5; ++i) {
      auto p = pc.gamma(consistent_field(s, 1.5, cfg.seed + 7 * i));
      Field b = pc.apply_A_eps(p.u);
      worst = std::max(worst, (pc.apply_A(p) - b).norm() / b.norm());
    }
  } else {
    auto s = TorusSpec::make(3, 4);
    auto n = std::make_shared<const EnhancedNoise3D>(enhance_3d(cfg.seed, 0.125, bump_mollifier(), s));
    Paracontrolled3D pc(n, 0);
    for (int i = 0; i < 3; ++i) {
      auto t = pc.gamma(consistent_field(s, 1.5, cfg.seed + 7 * i));
      Field b = pc.flat_operator_direct(t.u_flat);
      worst = std::max(worst, (pc.flat_operator(t) - b).norm() / b.norm());
    }
  }
  return {"operator-consistency", worst <= 1e-9, "max rel " + fmt(worst)};
}

SuiteResult hermitian(const RunConfig& cfg) {
  auto s = TorusSpec::make(cfg.dim, cfg.dim == 2 ? 12 : 4);
  auto n = enhance_2d(cfg.seed, 0.125, bump_mollifier(), TorusSpec::make(2, 12));
  OperatorMatrix M = cfg.dim == 2 ? assemble_matrix_eps(n)
                                  : assemble_matrix_eps_3d(enhance_3d(cfg.seed, 0.25, bump_mollifier(), s));
  double a = M.asymmetry() / M.scale();
  return {"hermitian", a <= 1e-12, "asymmetry/scale " + fmt(a)};
}

Hamiltonian small_ham(const RunConfig& cfg) {
  auto s = TorusSpec::make(2, 8);
  auto n = enhance_2d(cfg.seed, 0.25, bump_mollifier(), s);
  Hamiltonian h(n.xi, n.c_eps, true);
  h.K_Xi = h.lambda_max() + 1.0;
  return h;
}

SuiteResult mass(const RunConfig& cfg) {
  Hamiltonian h = small_ham(cfg);
  SpectralPropagator P(h);
  Field u = consistent_field(h.spec(), 2.0, cfg.seed + 5);
  u *= 1.0 / lp_norm(u, kInf);
  u.reality = false;
  EvolutionConfig e;
  e.dt = 1e-3;
  e.T = 1.0;
  e.record_every = 100;
  EvolutionTrace tr = nls_solve(P, u, e);
  double d = 0;
  for (double m : tr.mass) d = std::max(d, std::abs(m / tr.mass.front() - 1.0));
  return {"mass", d <= 1e-9, "relative drift " + fmt(d)};
}

SuiteResult wave_energy(const RunConfig& cfg) {
  Hamiltonian h = small_ham(cfg);
  SpectralPropagator P(h);
  Field u = consistent_field(h.spec(), 2.0, cfg.seed + 6), v = consistent_field(h.spec(), 1.0, cfg.seed + 8);
  EvolutionConfig e;
  e.equation = Equation::linear_wave;
  e.dt = 1e-2;
  e.T = 1.0;
  EvolutionTrace tr = wave_solve(P, u, v, e);
  double d = 0;
  for (double x : tr.energy) d = std::max(d, std::abs(x / tr.energy.front() - 1.0));
  return {"wave-energy", d <= 1e-10, "relative drift " + fmt(d)};
}

SuiteResult log_gronwall(const RunConfig&) {
  std::vector<double> ts{0.25, 0.5, 1.0, 1.5, 2.0};
  double worst = 0;
  for (double C2 : {1.0, 2.0})
    for (double h0 : {std::exp(1.0), std::exp(2.0)}) {
      auto r = log_gronwall_ode(C2, h0, ts);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        double b = log_gronwall_bound_corrected(C2, h0, ts[i]);
        worst = std::max(worst, std::abs(r[i] / b - 1.0));
      }
    }
  return {"log-gronwall-ode", worst <= 1e-6, "ODE vs corrected closed form " + fmt(worst)};
}

SuiteResult determinism(const RunConfig& cfg) {
  auto s = TorusSpec::make(cfg.dim, cfg.dim == 2 ? 16 : 6);
  Field a = sample_white_noise(cfg.seed, s), b = sample_white_noise(cfg.seed, s);
  auto big = TorusSpec::make(cfg.dim, 2 * s.K);
  Field c = sample_white_noise(cfg.seed, big);
  bool ok = (a - b).norm() == 0.0;
  for (std::size_t i = 0; ok && i < a.size(); ++i) ok = a[i] == c.at(s.k_of(i));
  return {"determinism", ok, "white noise repeatable and K-consistent"};
}

}  // namespace

std::vector<std::string> check_suite_names() {
  return {"csv-roundtrip", "bony", "operator-consistency", "hermitian", "mass", "wave-energy", "log-gronwall-ode",
          "determinism"};
}

SuiteResult run_check_suite(const std::string& name, const RunConfig& cfg) {
  try {
    if (name == "csv-roundtrip") return csv_roundtrip(cfg);
    if (name == "bony") return bony(cfg);
    if (name == "operator-consistency") return operator_consistency(cfg);
    if (name == "hermitian") return hermitian(cfg);
    if (name == "mass") return mass(cfg);
    if (name == "wave-energy") return wave_energy(cfg);
    if (name == "log-gronwall-ode") return log_gronwall(cfg);
    if (name == "determinism") return determinism(cfg);
  } catch (const NumericalFailure& e) {
    return {name, false, std::string("numerical failure: ") + e.what()};
  }
  throw ConfigError("unknown check suite '" + name + "'");
}

}  // namespace atorus
