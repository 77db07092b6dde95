#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>

#include "atorus/evolve.hpp"

namespace atorus {

namespace {

Hamiltonian::Route route_of(const Hamiltonian& h) {
  return h.dense() ? Hamiltonian::Route::matrix : Hamiltonian::Route::iterative;
}

DomainData finish(const Field& u0, const Field& Hu0, const Hamiltonian& H_eps) {
  DomainData d;
  d.u0 = u0;
  d.u0_eps = H_eps.resolvent(-Hu0, route_of(H_eps));
  d.u0_eps.reality = u0.reality;
  d.diff = (d.u0_eps - u0).norm();
  double ref = Hu0.norm();
  Field r = H_eps.apply_H(d.u0_eps) - Hu0;
  d.residual = ref > 0 ? r.norm() / ref : r.norm();
  return d;
}

std::size_t nearest(const std::vector<double>& ts, double t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (std::abs(ts[i] - t) < std::abs(ts[best] - t)) best = i;
  return best;
}

}  // namespace

DomainData prepare_domain_data(const Hamiltonian& H, const Hamiltonian& H_eps, const Field& u0) {
  return finish(u0, H.apply_H(u0), H_eps);
}

DomainData prepare_domain_data(const OperatorBundle2D& ref, const Hamiltonian& H_eps, const Field& u0_sharp) {
  ParacontrolledPair p = ref.pc->gamma(u0_sharp);
  Field Hu = ref.pc->apply_A(p);
  Hu.axpy(-ref.K_Xi(), p.u);
  return finish(p.u, Hu, H_eps);
}

DomainData prepare_domain_data(const OperatorBundle3D& ref, const Hamiltonian& H_eps, const Field& u0_sharp) {
  FlatSharpTriple t = ref.pc->gamma(u0_sharp);
  Field Hu = ref.pc->apply_A(t);
  Hu.axpy(-ref.K_Xi(), t.u);
  return finish(t.u, Hu, H_eps);
}

Field prepare_energy_data(const SpectralPropagator& P, const Field& u0, double eps, const Hamiltonian* H_eps) {
  if (eps < 0) throw std::invalid_argument("prepare_energy_data: eps must be >= 0");
  Field v = eps == 0.0 ? u0 : P.apply([eps](double m) { return cplx(1.0 / (1.0 + eps * std::sqrt(m)), 0.0); }, u0);
  if (H_eps) {
    v = H_eps->resolvent(P.hamiltonian().apply_minus_H(v), route_of(*H_eps));
    v.reality = u0.reality;
  }
  return v;
}

AprioriReport nls_domain_apriori_check(const EvolutionTrace& tr, double E0) {
  AprioriReport r;
  if (tr.h_norm.empty()) return r;
  double B = tr.h_norm.front();
  double lb = std::log1p(B);
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    double expo = std::exp(E0 * tr.t[i]) * lb;
    double env = expo > 700 ? kInf : std::expm1(expo);
    double q = env > 0 ? tr.h_norm[i] / env : (tr.h_norm[i] > 0 ? kInf : 0.0);
    r.max_ratio = std::max(r.max_ratio, q);
  }
  r.ok = r.max_ratio <= 1.0 + 1e-9;
  return r;
}

AprioriReport energy_apriori_check(const EvolutionTrace& tr, const SpectralPropagator& P) {
  AprioriReport r;
  if (tr.mass.empty()) return r;
  for (double m : tr.mass) r.sup_mass_ratio = std::max(r.sup_mass_ratio, tr.mass.front() > 0 ? m / tr.mass.front() : 0.0);
  double E0 = tr.energy.front();
  for (const Field& u : tr.u)
    r.sup_energy_ratio = std::max(r.sup_energy_ratio, E0 > 0 ? P.quad_minus_H(u) / E0 : kInf);
  for (std::size_t i = 0; i < tr.u.size(); ++i)
    for (std::size_t j = i + 1; j < tr.u.size(); ++j) {
      double dt = std::abs(tr.snap_t[j] - tr.snap_t[i]);
      if (dt > 0) r.holder_half = std::max(r.holder_half, (tr.u[j] - tr.u[i]).norm() / std::sqrt(dt));
    }
  r.max_ratio = std::max(r.sup_mass_ratio, r.sup_energy_ratio);
  r.ok = std::isfinite(r.max_ratio) && std::isfinite(r.holder_half);
  return r;
}

PhiTable convergence_experiment(const Hamiltonian& ref, const std::vector<std::function<Hamiltonian()>>& rungs,
                                const std::vector<double>& eps, const Field& u0, const Field& u1,
                                const EvolutionConfig& cfg, const std::vector<double>& times, DataMode mode) {
  if (rungs.size() != eps.size()) throw std::invalid_argument("convergence_experiment: eps/rung count mismatch");
  const bool wave = cfg.equation == Equation::wave || cfg.equation == Equation::linear_wave;
  const bool energy = mode == DataMode::energy;
  EvolutionConfig c = cfg;
  c.snapshot_times = times;
  c.keep_snapshots = false;
  c.record_every = std::max<int>(1, int(std::lround(cfg.T / cfg.dt)));

  PhiTable tab;
  tab.eps = eps;
  tab.times = times;

  struct Ref {
    std::vector<Field> u, du, Hu, Su, Sdu;
  } R;
  SpectralPropagator Pref(ref);
  {
    const SpectralPropagator& P = Pref;
    EvolutionTrace tr = wave ? wave_solve(P, u0, u1, c) : nls_solve(P, u0, c);
    for (double t : times) {
      std::size_t k = nearest(tr.snap_t, t);
      R.u.push_back(tr.u[k]);
      R.du.push_back(tr.du[k]);
      if (wave || energy) {
        R.Su.push_back(P.sqrt_minus_H(tr.u[k]));
        R.Sdu.push_back(P.sqrt_minus_H(tr.du[k]));
      } else {
        R.Hu.push_back(ref.apply_H(tr.u[k]));
      }
    }
  }

  for (std::size_t r = 0; r < rungs.size(); ++r) {
    Hamiltonian h = rungs[r]();
    h.K_Xi = ref.K_Xi;
    Field a = energy ? prepare_energy_data(Pref, u0, eps[r], &h) : prepare_domain_data(ref, h, u0).u0_eps;
    Field b = !wave ? u1 : energy ? prepare_energy_data(Pref, u1, eps[r], &h) : prepare_domain_data(ref, h, u1).u0_eps;
    SpectralPropagator P(h);
    EvolutionTrace tr = wave ? wave_solve(P, a, b, c) : nls_solve(P, a, c);
    std::vector<double> row;
    for (std::size_t i = 0; i < times.size(); ++i) {
      std::size_t k = nearest(tr.snap_t, times[i]);
      const Field &u = tr.u[k], &du = tr.du[k];
      double phi = (u - R.u[i]).norm();
      if (energy && !wave) {
        row.push_back(phi + (P.sqrt_minus_H(u) - R.Su[i]).norm());
        continue;
      }
      phi += (du - R.du[i]).norm();
      if (wave)
        phi += (P.sqrt_minus_H(u) - R.Su[i]).norm() + (P.sqrt_minus_H(du) - R.Sdu[i]).norm();
      else
        phi += (h.apply_H(u) - R.Hu[i]).norm();
      row.push_back(phi);
    }
    tab.phi.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> col;
    for (const auto& row : tab.phi) col.push_back(row[i]);
    tab.inversions.push_back(count_inversions(col));
  }
  return tab;
}

void write_trace_csv(std::ostream& os, const EvolutionTrace& tr) {
  auto cell = [&](const std::vector<double>& v, std::size_t i) {
    if (i < v.size()) os << std::setprecision(17) << v[i];
  };
  os << "t,mass,energy,tilde_energy,linf,h_norm,phi_eps\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    cell(tr.t, i);
    os << ',';
    cell(tr.mass, i);
    os << ',';
    cell(tr.energy, i);
    os << ',';
    cell(tr.tilde_energy, i);
    os << ',';
    cell(tr.linf, i);
    os << ',';
    cell(tr.h_norm, i);
    os << ',';
    cell(tr.phi, i);
    os << '\n';
  }
}

}  // namespace atorus
