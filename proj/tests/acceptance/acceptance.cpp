// Acceptance criteria 1..13. Usage: acceptance [id ...]  (no ids: all)
// One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "atorus/harness.hpp"

using namespace atorus;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

double rel(const Field& a, const Field& b) { return (a - b).norm() / b.norm(); }

std::shared_ptr<const EnhancedNoise2D> noise2(std::uint64_t seed, double eps, int K,
                                              const Mollifier& m = bump_mollifier()) {
  return std::make_shared<const EnhancedNoise2D>(enhance_2d(seed, eps, m, TorusSpec::make(2, K)));
}
std::shared_ptr<const EnhancedNoise3D> noise3(std::uint64_t seed, double eps, int K) {
  return std::make_shared<const EnhancedNoise3D>(enhance_3d(seed, eps, bump_mollifier(), TorusSpec::make(3, K)));
}

double spread(const std::vector<double>& v) {
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / std::max(std::abs(*hi), std::abs(*lo));
}

// ---- 1. Bony identity
Verdict c01() {
  const double tol = 1e-10;
  double worst = 0;
  for (int d : {2, 3}) {
    auto s = TorusSpec::make(d, d == 2 ? 64 : 8);
    for (int i = 0; i < 200; ++i) {
      Field f = smooth_field(s, s.K / 2, 1000 + i), g = smooth_field(s, s.K / 2, 5000 + i);
      Field fg = product(f, g);
      ProductTriple t = paraproduct(f, g);
      worst = std::max(worst, rel(t.sum(), fg));
    }
  }
  return {worst <= tol, "max rel residual " + num(worst) + " (tol " + num(tol) + ", 2x200 pairs)"};
}

// ---- 2. adjoint defect against the block sum
// D = sum_{i >= k-1, |j-k| <= 1} - sum_{i <= k-2, 1 < |j-k| <= L} (D_i f, D_j h D_k g)
cplx defect_block_sum(const Field& f, const Field& g, const Field& h, int L) {
  int jm = default_partition().j_max(f.spec());
  cplx s = 0;
  for (int k = -1; k <= jm; ++k) {
    Field gk = lp_block(g, k);
    for (int j = std::max(-1, k - L); j <= std::min(jm, k + L); ++j) {
      Field hg = product(lp_block(h, j), gk);
      for (int i = -1; i <= jm; ++i) {
        bool near = std::abs(j - k) <= 1;
        if (near && i >= k - 1)
          s += pairing(lp_block(f, i), hg);
        else if (!near && i <= k - 2)
          s -= pairing(lp_block(f, i), hg);
      }
    }
  }
  return s;
}

Verdict c02() {
  const double tol = 1e-10;
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    int d = i % 2 ? 3 : 2;
    int K = d == 2 ? 8 + 2 * (i % 5) : 4 + (i % 3);  // 8..16 and 4..6
    auto s = TorusSpec::make(d, K);
    Field f = rough_field(s, 0.3, 10 * i + 1), g = rough_field(s, -0.4, 10 * i + 2),
          h = rough_field(s, 0.6, 10 * i + 3);
    cplx a = adjoint_defect_D(f, g, h), o = defect_block_sum(f, g, h, 4);
    worst = std::max(worst, std::abs(a - o) / std::max(std::abs(o), 1e-300));
  }
  return {worst <= tol, "max rel mismatch " + num(worst) + " over 50 triples, K <= 16"};
}

// ---- 3. paracontrolled A on Gamma-built inputs against the direct formula
Verdict c03() {
  const double tol = 1e-7;
  double w2 = 0, w3a = 0, w3b = 0;
  {
    auto n = noise2(7, 1.0 / 16, 32);
    Paracontrolled2D pc(n, choose_N(*n));
    for (int i = 0; i < 20; ++i) {
      auto p = pc.gamma(consistent_field(n->xi.spec(), 1.5, 300 + i));
      w2 = std::max(w2, rel(pc.apply_A(p), pc.apply_A_eps(p.u)));
    }
  }
  {
    // flat route at a rough rung: F(u_flat) paracontrolled vs direct
    auto n = noise3(7, 1.0 / 8, 8);
    Paracontrolled3D pc(n, choose_N_3d(*n));
    for (int i = 0; i < 20; ++i) {
      auto t = pc.gamma(consistent_field(n->xi.spec(), 1.5, 400 + i));
      w3a = std::max(w3a, rel(pc.flat_operator(t), pc.flat_operator_direct(t.u_flat)));
    }
  }
  {
    // full lift, where e^{+-W} u_flat stays inside the lattice
    auto n = noise3(7, 0.5, 8);
    Paracontrolled3D pc(n, choose_N_3d(*n));
    for (int i = 0; i < 20; ++i) {
      auto t = pc.gamma(smooth_field(n->xi.spec(), 2, 500 + i));
      w3b = std::max(w3b, rel(pc.apply_A(t), pc.apply_A_eps(t.u)));
    }
  }
  double w = std::max({w2, w3a, w3b});
  return {w <= tol, "2-d K=32 " + num(w2) + ", 3-d K=8 flat " + num(w3a) + ", lift " + num(w3b) + " (tol " +
                        num(tol) + ")"};
}

// ---- 4. Hermitian matrix, symmetry defect of paracontrolled A under K doubling
double defect_2d(int K) {
  auto n = noise2(7, 0.125, K);
  Paracontrolled2D pc(n, choose_N(*n));
  double d = 0;
  for (int i = 0; i < 20; ++i) {
    auto p = pc.gamma(consistent_field(n->xi.spec(), 1.5, 600 + i));
    auto q = pc.gamma(consistent_field(n->xi.spec(), 1.5, 700 + i));
    Field Au = pc.apply_A(p), Av = pc.apply_A(q);
    double den = p.u.norm() * Av.norm() + Au.norm() * q.u.norm();
    d = std::max(d, std::abs(p.u.inner(Av) - Au.inner(q.u)) / den);
  }
  return d;
}
double defect_3d(int K) {
  auto n = noise3(7, 0.25, K);
  Paracontrolled3D pc(n, choose_N_3d(*n));
  double d = 0;
  for (int i = 0; i < 20; ++i) {
    auto p = pc.gamma(consistent_field(n->xi.spec(), 1.5, 600 + i));
    auto q = pc.gamma(consistent_field(n->xi.spec(), 1.5, 700 + i));
    Field Au = pc.apply_A(p), Av = pc.apply_A(q);
    double den = p.u.norm() * Av.norm() + Au.norm() * q.u.norm();
    d = std::max(d, std::abs(p.u.inner(Av) - Au.inner(q.u)) / den);
  }
  return d;
}

Verdict c04() {
  const double herm_tol = 1e-12, ratio_max = 0.7, floor = 1e-12;
  OperatorMatrix M2 = assemble_matrix_eps(*noise2(7, 1.0 / 16, 32));
  OperatorMatrix M3 = assemble_matrix_eps_3d(*noise3(7, 0.25, 8));
  double h = std::max(M2.asymmetry() / M2.scale(), M3.asymmetry() / M3.scale());
  double a2 = defect_2d(16), b2 = defect_2d(32), a3 = defect_3d(4), b3 = defect_3d(8);
  // decreasing, or both already at the roundoff floor
  auto ok = [&](double a, double b) { return b <= ratio_max * a || (a <= floor && b <= floor); };
  bool pass = h <= herm_tol && ok(a2, b2) && ok(a3, b3);
  return {pass, "asymmetry/scale " + num(h) + "; defect 2-d K16 " + num(a2) + " -> K32 " + num(b2) + ", 3-d K4 " +
                    num(a3) + " -> K8 " + num(b3) + " (ratio <= " + num(ratio_max) + " or both <= " + num(floor) +
                    ")"};
}

// ---- 5. Gamma bounds at the automatic N
Verdict c05() {
  const double linf_c = 2.0, h2 = 3.0, h3 = 2.0, tol = 1e-10;
  const int iters = 50;
  double rinf = 0, rs2 = 0, rs3 = 0, res = 0;
  int it = 0;
  auto n2 = noise2(7, 1.0 / 16, 32);
  Paracontrolled2D pc2(n2, choose_N(*n2));
  for (int i = 0; i < 100; ++i) {
    Field f = consistent_field(n2->xi.spec(), 1.0, 800 + i);
    auto p = pc2.gamma(f, tol, iters);
    rinf = std::max(rinf, lp_norm(p.u, kInf) / lp_norm(f, kInf));
    rs2 = std::max(rs2, sobolev_norm(p.u, 0.8) / sobolev_norm(f, 0.8));
    res = std::max(res, p.residual);
    it = std::max(it, p.iterations);
  }
  auto n3 = noise3(7, 1.0 / 8, 8);
  Paracontrolled3D pc3(n3, choose_N_3d(*n3));
  for (int i = 0; i < 100; ++i) {
    Field f = consistent_field(n3->xi.spec(), 1.0, 900 + i);
    auto t = pc3.gamma(f, tol, iters);
    rinf = std::max(rinf, lp_norm(t.u_flat, kInf) / lp_norm(f, kInf));
    rs3 = std::max(rs3, sobolev_norm(t.u_flat, 1.0) / sobolev_norm(f, 1.0));
    res = std::max(res, t.residual);
    it = std::max(it, t.iterations);
  }
  bool pass = rinf <= linf_c && rs2 <= h2 && rs3 <= h3 && res <= tol && it <= iters;
  return {pass, "N2=" + std::to_string(pc2.N()) + " N3=" + std::to_string(pc3.N()) + "; max L^inf ratio " +
                    num(rinf) + ", H^0.8 " + num(rs2) + ", H^1 " + num(rs3) + "; iterations " + std::to_string(it) +
                    ", residual " + num(res)};
}

// ---- 6. renormalization constants against log(1/eps) and 1/eps
Verdict c06() {
  const double tol = 0.15;
  Mollifier m = bump_mollifier();
  std::vector<double> r2, r3, r2p;
  std::ostringstream os;
  for (int j = 3; j <= 7; ++j) {
    double eps = std::ldexp(1.0, -j);
    double c = renorm_const_2d(eps, m, 256), c1 = renorm_c1_3d(eps, m, 48);
    // the constant written with 1/(1+|k|^2), for information
    double cp = 0;
    for (int a = -256; a <= 256; ++a)
      for (int b = -256; b <= 256; ++b) {
        double k = std::hypot(a, b), w = m(eps * k);
        cp += w * w / (1.0 + k * k);
      }
    if (j >= 5) {
      r2.push_back(c / std::log(1 / eps));
      r3.push_back(eps * c1);
      r2p.push_back(cp / std::log(1 / eps));
    }
    os << " 2^-" << j << ":" << num(c / std::log(1 / eps)) << "/" << num(eps * c1);
  }
  double s2 = spread(r2), s3 = spread(r3);
  return {s2 < tol && s3 < tol, "spread last three rungs: c/log(1/eps) " + num(s2) + ", eps c1 " + num(s3) +
                                   " (tol " + num(tol) + "); with 1/(1+|k|^2) " + num(spread(r2p)) + ";" + os.str()};
}

// ---- 7. resolvent ladder
Verdict c07() {
  std::vector<std::shared_ptr<const EnhancedNoise2D>> r2;
  for (int j = 2; j <= 6; ++j) r2.push_back(noise2(7, std::ldexp(1.0, -j), 32));
  std::vector<Field> f2;
  for (int i = 0; i < 20; ++i) f2.push_back(consistent_field(r2[0]->xi.spec(), 0.0, 1100 + i));
  LadderTable t2 = resolvent_ladder(r2, f2, 0.8);

  std::vector<std::shared_ptr<const EnhancedNoise3D>> r3;
  for (int j = 2; j <= 6; ++j) r3.push_back(noise3(7, std::ldexp(1.0, -j), 8));
  std::vector<Field> f3;
  for (int i = 0; i < 20; ++i) f3.push_back(consistent_field(r3[0]->xi.spec(), 0.0, 1200 + i));
  LadderTable t3 = resolvent_ladder_3d(r3, f3, 1.2);

  int m2 = *std::max_element(t2.inversions.begin(), t2.inversions.end());
  int m3 = *std::max_element(t3.inversions.begin(), t3.inversions.end());
  std::string d = "max inversions 2-d " + std::to_string(m2) + ", 3-d " + std::to_string(m3) + "; opnorm 2-d";
  for (double x : t2.opnorm) d += " " + num(x);
  d += ", 3-d";
  for (double x : t3.opnorm) d += " " + num(x);
  return {m2 <= 1 && m3 <= 1, d};
}

// ---- 8. lower bounds: calibrate on 100, hold out 100
Verdict c08() {
  BundleOptions o;
  o.dense = false;
  auto n2 = noise2(7, 1.0 / 16, 32);
  OperatorBundle2D b2 = shift_and_bundle(*n2, o);
  std::vector<ParacontrolledPair> cal, hold;
  for (int i = 0; i < 100; ++i) cal.push_back(b2.pc->gamma(consistent_field(n2->xi.spec(), 1.0, 1300 + i)));
  for (int i = 0; i < 100; ++i) hold.push_back(b2.pc->gamma(consistent_field(n2->xi.spec(), 1.0, 1400 + i)));
  calibrate_C_Xi(b2, cal);
  double s2 = kInf;
  for (const auto& p : hold) s2 = std::min(s2, lower_bound_check(b2, p));

  auto n3 = noise3(7, 1.0 / 8, 8);
  OperatorBundle3D b3 = shift_and_bundle_3d(*n3, o);
  std::vector<FlatSharpTriple> cal3, hold3;
  for (int i = 0; i < 100; ++i) cal3.push_back(b3.pc->gamma(consistent_field(n3->xi.spec(), 1.0, 1500 + i)));
  for (int i = 0; i < 100; ++i) hold3.push_back(b3.pc->gamma(consistent_field(n3->xi.spec(), 1.0, 1600 + i)));
  calibrate_C_Xi_3d(b3, cal3);
  double s3 = kInf;
  for (const auto& t : hold3) s3 = std::min(s3, h1_flat_bound_check(b3, t));
  return {s2 >= 0 && s3 >= 0, "C_Xi 2-d " + num(b2.C_Xi) + ", min holdout slack " + num(s2) + "; C_Xi 3-d " +
                                  num(b3.C_Xi) + ", min slack " + num(s3)};
}

// ---- 9. functional inequalities under one resolution doubling
struct Ineq9 {
  IneqReport r;
  double agmon = 0;
};
Ineq9 ineq_at(int d, int K, double eps) {
  auto s = TorusSpec::make(d, K);
  bool dense = s.size() <= kMaxDenseRows;
  Hamiltonian h;
  if (d == 2) {
    auto n = enhance_2d(7, eps, bump_mollifier(), s);
    h = Hamiltonian(n.xi, n.c_eps, dense);
  } else {
    auto n = enhance_3d(7, eps, bump_mollifier(), s);
    h = Hamiltonian(n.xi, n.c1 + n.c2, dense);
  }
  h.K_Xi = h.lambda_max() + 1.0;
  std::vector<Field> us;
  for (int i = 0; i < 100; ++i)
    us.push_back(h.resolvent(consistent_field(s, 0.5, 1700 + i),
                             dense ? Hamiltonian::Route::matrix : Hamiltonian::Route::iterative, 1e-10));
  Ineq9 out;
  out.r = functional_ineq_report(h, us);
  for (const Field& u : us) out.agmon = std::max(out.agmon, agmon_ratio(h, u));
  return out;
}

Verdict c09() {
  const double factor = 2.0;
  bool pass = true;
  std::string d;
  auto cmp = [&](const std::string& name, double a, double b) {
    bool ok = std::isfinite(a) && std::isfinite(b) && a > 0 && b > 0 && b / a <= factor && a / b <= factor;
    pass = pass && ok;
    d += " " + name + " " + num(a) + "->" + num(b);
  };
  Ineq9 a = ineq_at(2, 16, 1.0 / 16), b = ineq_at(2, 32, 1.0 / 16);
  d += "2-d K16->32:";
  cmp("BG", a.r.max_bg, b.r.max_bg);
  cmp("L4", a.r.max_l4, b.r.max_l4);
  cmp("L6", a.r.max_l6, b.r.max_l6);
  cmp("Linf/H", a.r.max_linf_h, b.r.max_linf_h);
  Ineq9 c = ineq_at(3, 6, 0.25), e = ineq_at(3, 12, 0.25);
  d += "; 3-d K6->12:";
  cmp("Agmon", c.agmon, e.agmon);
  cmp("L4", c.r.max_l4, e.r.max_l4);
  cmp("L6", c.r.max_l6, e.r.max_l6);
  return {pass, d};
}

// ---- shared K=32 operator for 10 and 11
Hamiltonian ham32() {
  auto n = enhance_2d(7, 1.0 / 16, bump_mollifier(), TorusSpec::make(2, 32));
  Hamiltonian h(n.xi, n.c_eps, true);
  h.K_Xi = h.lambda_max() + 1.0;
  return h;
}

double max_drift(const std::vector<double>& v) {
  double d = 0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()));
  return d;
}

// ---- 10. NLS: mass and energy order
Verdict c10() {
  const double mass_tol = 1e-8, slope_tol = 0.3;
  Hamiltonian h = ham32();
  SpectralPropagator P(h);
  // data in the operator domain: (-H)^{-1} f, sup norm 1
  Field u0 = h.resolvent(consistent_field(h.spec(), 1.0, 11), Hamiltonian::Route::matrix);
  u0 *= 1.0 / lp_norm(u0, kInf);
  u0.reality = false;
  std::vector<double> dts{2e-3, 1e-3, 5e-4, 2.5e-4}, drift;
  std::vector<EvolutionConfig> cs;
  for (double dt : dts) {
    EvolutionConfig c;
    c.dt = dt;
    c.T = 1.0;
    c.record_every = int(std::lround(0.01 / dt));
    cs.push_back(c);
  }
  auto trs = nls_solve_batch(P, u0, cs);
  for (const auto& tr : trs) drift.push_back(max_drift(tr.energy));
  const auto& m = trs[1].mass;
  double dm = max_drift(m) / m.front();
  double slope = loglog_slope(dts, drift);
  std::string d = "mass drift (dt=1e-3) " + num(dm) + "; energy drift";
  for (double x : drift) d += " " + num(x);
  d += "; slope " + num(slope);
  return {dm <= mass_tol && std::abs(slope - 2) <= slope_tol, d};
}

// ---- 11. wave: linear energy, cubic energy order, tilde-energy identity order
Verdict c11() {
  const double lin_tol = 1e-10, slope_tol = 0.3;
  Hamiltonian h = ham32();
  SpectralPropagator P(h);
  Field u0 = consistent_field(h.spec(), 2.0, 11), u1 = consistent_field(h.spec(), 2.0, 12);
  u0 *= 1.0 / lp_norm(u0, kInf);
  u1 *= 1.0 / lp_norm(u1, kInf);
  u0.reality = u1.reality = true;

  EvolutionConfig c;
  c.equation = Equation::linear_wave;
  c.dt = 1e-2;
  c.T = 1.0;
  EvolutionTrace lin = wave_solve(P, u0, u1, c);
  double dl = max_drift(lin.energy) / lin.energy.front();

  c.equation = Equation::wave;
  std::vector<double> dts{8e-3, 4e-3, 2e-3, 1e-3}, de, dr;
  for (double dt : dts) {
    c.dt = dt;
    c.record_every = int(std::lround(0.008 / dt));
    EvolutionTrace tr = wave_solve(P, u0, u1, c);
    de.push_back(max_drift(tr.energy));
    double r = 0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) r = std::max(r, std::abs(tr.tilde_energy[i] - tr.tilde_rhs[i]));
    dr.push_back(r);
  }
  double se = loglog_slope(dts, de), sr = loglog_slope(dts, dr);
  std::string d = "linear rel drift " + num(dl) + "; cubic drift";
  for (double x : de) d += " " + num(x);
  d += " slope " + num(se) + "; tilde residual";
  for (double x : dr) d += " " + num(x);
  d += " slope " + num(sr);
  return {dl <= lin_tol && std::abs(se - 2) <= slope_tol && std::abs(sr - 2) <= slope_tol, d};
}

// ---- 12. solution convergence along the eps ladder
Verdict c12() {
  auto s = TorusSpec::make(2, 32);
  auto ref_noise = noise2(7, 1.0, 32, identity_mollifier());
  Hamiltonian ref(ref_noise->xi, ref_noise->c_eps, true);
  std::vector<double> eps;
  std::vector<std::function<Hamiltonian()>> rungs;
  double K = ref.lambda_max();
  for (int j = 2; j <= 5; ++j) {
    double e = std::ldexp(1.0, -j);
    eps.push_back(e);
    rungs.push_back([e] {
      auto n = enhance_2d(7, e, bump_mollifier(), TorusSpec::make(2, 32));
      return Hamiltonian(n.xi, n.c_eps, true);
    });
    K = std::max(K, rungs.back()().lambda_max());
  }
  ref.K_Xi = K + 1.0;

  // u0 = Gamma u0_sharp for the reference noise
  Paracontrolled2D pc(ref_noise, choose_N(*ref_noise));
  Field u0 = pc.gamma(consistent_field(s, 1.5, 11)).u;
  u0 *= 1.0 / lp_norm(u0, kInf);
  Field u1 = consistent_field(s, 1.5, 12);
  u1 *= 0.5 / lp_norm(u1, kInf);
  u0.reality = u1.reality = true;

  EvolutionConfig c;
  c.dt = 1e-3;
  c.T = 0.5;
  std::vector<double> times{0.1, 0.25, 0.5};
  bool pass = true;
  std::string d = "K_Xi " + num(ref.K_Xi);
  for (Equation eq : {Equation::nls, Equation::wave}) {
    c.equation = eq;
    Field a = u0;
    a.reality = eq == Equation::wave;
    PhiTable t = convergence_experiment(ref, rungs, eps, a, u1, c, times);
    d += eq == Equation::nls ? "; nls" : "; wave";
    for (std::size_t i = 0; i < times.size(); ++i) {
      pass = pass && t.inversions[i] == 0;
      d += " t=" + num(times[i]) + ":";
      for (const auto& row : t.phi) d += " " + num(row[i]);
    }
  }
  return {pass, d};
}

// ---- 13. log-Gronwall bound against the ODE trajectory
Verdict c13() {
  const double rtol = 1e-9;
  std::vector<double> ts;
  for (int i = 0; i <= 200; ++i) ts.push_back(0.01 * i);
  bool pass = true, corrected = true;
  std::string d;
  for (double C2 : {1.0, 2.0})
    for (double h0 : {std::exp(1.0), std::exp(2.0)}) {
      auto rho = log_gronwall_ode(C2, h0, ts);
      double worst = 0;  // max rho / (bound + 1)
      for (std::size_t i = 0; i < ts.size(); ++i) {
        worst = std::max(worst, rho[i] / (log_gronwall_bound(C2, h0, ts[i]) + 1.0));
        corrected = corrected && rho[i] <= log_gronwall_bound_corrected(C2, h0, ts[i]) * (1 + 1e-6);
      }
      pass = pass && worst <= 1 + rtol;
      d += " (" + num(C2) + ",e^" + num(std::log(h0)) + "): max rho/(bound+1) " + num(worst);
    }
  d += std::string("; corrected bound dominates: ") + (corrected ? "yes" : "no");
  return {pass, d.substr(1)};
}

const std::map<int, std::pair<std::string, std::function<Verdict()>>>& registry() {
  static const std::map<int, std::pair<std::string, std::function<Verdict()>>> r{
      {1, {"Bony identity", c01}},
      {2, {"adjoint defect oracle", c02}},
      {3, {"operator consistency", c03}},
      {4, {"self-adjointness surrogate", c04}},
      {5, {"Gamma-map bounds", c05}},
      {6, {"renormalization asymptotics", c06}},
      {7, {"norm-resolvent ladder", c07}},
      {8, {"lower bounds", c08}},
      {9, {"functional inequalities", c09}},
      {10, {"NLS conservation", c10}},
      {11, {"wave conservation", c11}},
      {12, {"solution convergence", c12}},
      {13, {"log-Gronwall", c13}},
  };
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  blas_runtime_guard(argc, argv);
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (const auto& [k, v] : registry()) ids.push_back(k);
  int failed = 0;
  for (int id : ids) {
    auto it = registry().find(id);
    if (it == registry().end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = it->second.second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s C%02d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", id, it->second.first.c_str(),
                v.detail.c_str(), sec);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
