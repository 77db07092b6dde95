#include <cmath>
#include <set>

#include "atorus/evolve.hpp"

namespace atorus {

EvolutionTrace wave_solve(const SpectralPropagator& P, const Field& u0, const Field& u1, const EvolutionConfig& cfg) {
  const TorusSpec& s = u0.spec();
  cfg.validate(s.dim);
  if (cfg.equation == Equation::nls || cfg.equation == Equation::linear_nls)
    throw std::invalid_argument("wave_solve: Schrodinger equation requested");
  if (u0.reality_defect() > 1e-10 || u1.reality_defect() > 1e-10)
    throw std::invalid_argument("wave_solve: data must be real-valued");
  Nonlinearity nl = cfg.nonlinearity;
  if (cfg.equation == Equation::linear_wave) nl.kind = Nonlinearity::Kind::none;
  const double sg = nl.sign();
  const long steps = std::lround(cfg.T / cfg.dt);
  std::set<long> snap;
  for (double t : cfg.snapshot_times) snap.insert(std::lround(t / cfg.dt));

  auto N = [&](const Field& u) {
    Grid g = to_colloc(u);
    for (cplx& z : g) z = nl.h(z.real() * z.real()) * z.real();
    Field f = from_colloc(g, s);
    f.reality = true;
    return f;
  };
  // sg/2 int N''(u) v^3, the rate of the tilde energy
  auto rate = [&](const Field& u, const Field& v) {
    if (nl.kind == Nonlinearity::Kind::none) return 0.0;
    Grid gu = to_colloc(u), gv = to_colloc(v);
    double m = 0;
    for (std::size_t i = 0; i < gu.size(); ++i) {
      double b = gv[i].real();
      m += nl.ddN(gu[i].real()) * b * b * b;
    }
    return 0.5 * sg * m / double(gu.size());
  };

  EvolutionTrace tr;
  tr.wave = true;
  double integral = 0, tilde0 = 0;
  auto record = [&](long step, const Field& u, const Field& v) {
    bool rec = step % cfg.record_every == 0 || step == steps;
    bool sn = snap.count(step) > 0;
    if (!rec && !sn) return;
    if (rec) {
      Field Hu = P.hamiltonian().apply_H(u);
      Field a = Hu;
      a.axpy(-sg, N(u));
      Grid gu = to_colloc(u), gv = to_colloc(v);
      double pot = 0, mix = 0, linf = 0;
      for (std::size_t i = 0; i < gu.size(); ++i) {
        double x = gu[i].real(), y = gv[i].real();
        pot += nl.density(x * x);
        mix += nl.dN(x) * y * y;
        linf = std::max(linf, std::abs(x));
      }
      pot /= double(gu.size());
      mix /= double(gu.size());
      double e = 0.5 * v.norm() * v.norm() + 0.5 * u.inner(-Hu).real() + sg * pot;
      double te = 0.5 * a.norm() * a.norm() + 0.5 * P.quad_minus_H(v) + 0.5 * sg * mix;
      if (step == 0) tilde0 = te;
      tr.t.push_back(step * cfg.dt);
      tr.mass.push_back(u.norm() * u.norm());
      tr.energy.push_back(e);
      tr.tilde_energy.push_back(te);
      tr.tilde_rhs.push_back(tilde0 + integral);
      tr.linf.push_back(linf);
      tr.h_norm.push_back(Hu.norm());
    }
    if ((cfg.keep_snapshots && rec) || sn) {
      tr.snap_t.push_back(step * cfg.dt);
      tr.u.push_back(u);
      tr.du.push_back(v);
    }
  };

  Field u = u0, v = u1;
  u.reality = v.reality = true;
  record(0, u, v);
  double q_prev = rate(u, v);
  const bool nonlinear = nl.kind != Nonlinearity::Kind::none;
  for (long k = 1; k <= steps; ++k) {
    if (nonlinear) v.axpy(-0.5 * sg * cfg.dt, N(u));
    auto [un, vn] = P.wave(u, v, cfg.dt);
    u = std::move(un);
    v = std::move(vn);
    if (nonlinear) v.axpy(-0.5 * sg * cfg.dt, N(u));
    u.reality = v.reality = true;
    double q = rate(u, v);
    integral += 0.5 * cfg.dt * (q_prev + q);
    q_prev = q;
    double linf = lp_norm(u, kInf);
    if (!std::isfinite(linf) || linf > cfg.blowup_linf)
      throw NumericalFailure("wave_solve: blow-up, L^inf exceeded threshold at t = " + std::to_string(k * cfg.dt));
    record(k, u, v);
  }
  tr.steps = std::size_t(steps);
  return tr;
}

}  // namespace atorus
