#include <cmath>
#include <set>

#include "atorus/evolve.hpp"

namespace atorus {

namespace {

double grid_linf(const Grid& g) {
  double m = 0;
  for (const cplx& z : g) m = std::max(m, std::abs(z));
  return m;
}

struct Run {
  const SpectralPropagator* P;
  EvolutionConfig cfg;
  Nonlinearity nl;
  double sg = 1;
  long steps = 0;
  std::set<long> snap;
  EvolutionTrace tr;
  Field u;

  Run(const SpectralPropagator& prop, const Field& u0, const EvolutionConfig& c) : P(&prop), cfg(c), u(u0) {
    cfg.validate(u0.spec().dim);
    if (cfg.equation == Equation::wave || cfg.equation == Equation::linear_wave)
      throw std::invalid_argument("nls_solve: wave equation requested");
    nl = cfg.nonlinearity;
    if (cfg.equation == Equation::linear_nls) nl.kind = Nonlinearity::Kind::none;
    sg = nl.sign();
    steps = std::lround(cfg.T / cfg.dt);
    for (double t : cfg.snapshot_times) snap.insert(std::lround(t / cfg.dt));
    u.reality = false;
  }

  bool linear() const { return nl.kind == Nonlinearity::Kind::none; }

  Field N(const Field& v) const {
    Grid g = to_colloc(v);
    for (cplx& z : g) z *= nl.h(std::norm(z));
    return from_colloc(g, v.spec());
  }
  Field phase(const Field& v, double tau) const {
    if (linear()) return v;
    Grid g = to_colloc(v);
    for (cplx& z : g) z *= std::exp(cplx(0.0, sg * tau * nl.h(std::norm(z))));
    return from_colloc(g, v.spec());
  }

  void record(long step) {
    bool rec = step % cfg.record_every == 0 || step == steps;
    bool sn = snap.count(step) > 0;
    if (!rec && !sn) return;
    Field Hu = P->hamiltonian().apply_H(u);
    if (rec) {
      Grid g = to_colloc(u);
      double m = 0;
      for (const cplx& z : g) m += nl.density(std::norm(z));
      tr.t.push_back(step * cfg.dt);
      tr.mass.push_back(u.norm() * u.norm());
      tr.energy.push_back(0.5 * u.inner(-Hu).real() + sg * m / double(g.size()));
      tr.linf.push_back(grid_linf(g));
      tr.h_norm.push_back(Hu.norm());
    }
    if ((cfg.keep_snapshots && rec) || sn) {
      Field du = Hu;
      du.axpy(-sg, N(u));
      du *= cplx(0.0, -1.0);
      tr.snap_t.push_back(step * cfg.dt);
      tr.u.push_back(u);
      tr.du.push_back(du);
    }
  }

  // Duhamel corrector after the propagated predictor a
  Field picard(const Field& a) const {
    Field w = a;
    if (linear()) return w;
    const cplx half(0.0, 0.5 * sg * cfg.dt);
    for (int it = 0; it < cfg.picard_max; ++it) {
      Field wn = a;
      wn.axpy(half, N(w));
      double r = (wn - w).norm();
      w = std::move(wn);
      if (r <= cfg.picard_tol * std::max(w.norm(), 1e-300)) return w;
    }
    throw NumericalFailure("nls_solve: Picard iteration did not converge (step too large)");
  }

  void check(long k) const {
    double linf = grid_linf(to_colloc(u));
    if (!std::isfinite(linf) || linf > cfg.blowup_linf)
      throw NumericalFailure("nls_solve: blow-up, L^inf exceeded threshold at t = " + std::to_string(k * cfg.dt));
  }
};

}  // namespace

std::vector<EvolutionTrace> nls_solve_batch(const SpectralPropagator& P, const Field& u0,
                                            const std::vector<EvolutionConfig>& cfgs) {
  std::vector<Run> runs;
  runs.reserve(cfgs.size());
  for (const auto& c : cfgs) runs.emplace_back(P, u0, c);
  long rounds = 0;
  for (Run& r : runs) {
    r.record(0);
    rounds = std::max(rounds, r.steps);
  }
  // every active run takes one step per round; the linear flows share one pass over the eigenvectors
  for (long k = 1; k <= rounds; ++k) {
    std::vector<Run*> act;
    std::vector<Field> pre;
    for (Run& r : runs)
      if (k <= r.steps) {
        act.push_back(&r);
        if (r.cfg.scheme == Scheme::strang) {
          pre.push_back(r.phase(r.u, 0.5 * r.cfg.dt));
        } else {
          Field a = r.u;
          if (!r.linear()) a.axpy(cplx(0.0, 0.5 * r.sg * r.cfg.dt), r.N(r.u));
          pre.push_back(std::move(a));
        }
      }
    std::vector<CVec> c = P.to_eig(pre);
    for (std::size_t j = 0; j < act.size(); ++j) {
      double dt = act[j]->cfg.dt;
      const RVec& lam = P.a_eigenvalues();
      for (std::size_t i = 0; i < c[j].size(); ++i) c[j][i] *= std::exp(cplx(0.0, dt * (P.K_Xi() - lam[i])));
    }
    std::vector<Field> post = P.from_eig(c);
    for (std::size_t j = 0; j < act.size(); ++j) {
      Run& r = *act[j];
      r.u = r.cfg.scheme == Scheme::strang ? r.phase(post[j], 0.5 * r.cfg.dt) : r.picard(post[j]);
      r.u.reality = false;
      r.check(k);
      r.record(k);
    }
  }
  std::vector<EvolutionTrace> out;
  for (Run& r : runs) {
    r.tr.steps = std::size_t(r.steps);
    out.push_back(std::move(r.tr));
  }
  return out;
}

EvolutionTrace nls_solve(const SpectralPropagator& P, const Field& u0, const EvolutionConfig& cfg) {
  return nls_solve_batch(P, u0, {cfg})[0];
}

}  // namespace atorus
