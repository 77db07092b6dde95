#include <cmath>

#include "atorus/anderson3d.hpp"

namespace atorus {

namespace {

double grad_sq(const Field& f) {
  const Lattice& lat = lattice(f.spec());
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += kFourPi2 * lat.k2[i] * std::norm(f[i]);
  return s;
}

}  // namespace

double h1_flat_bound_check(const OperatorBundle3D& b, const FlatSharpTriple& t) {
  if (!b.C_Xi_calibrated) throw std::logic_error("h1_flat_bound_check: C_Xi not calibrated");
  double uu = t.u.norm() * t.u.norm();
  double uAu = t.u.inner(b.ham.apply_A(t.u)).real();
  return b.exp_m2W_sup * (-uAu + b.C_Xi * uu) - grad_sq(t.u_flat);
}

double calibrate_C_Xi_3d(OperatorBundle3D& b, const std::vector<FlatSharpTriple>& samples) {
  double sup = -kInf;
  for (const auto& t : samples) {
    double uu = t.u.norm() * t.u.norm();
    if (uu == 0.0) continue;
    double uAu = t.u.inner(b.ham.apply_A(t.u)).real();
    sup = std::max(sup, (grad_sq(t.u_flat) / b.exp_m2W_sup + uAu) / uu);
  }
  if (!std::isfinite(sup)) throw std::invalid_argument("calibrate_C_Xi_3d: no nonzero samples");
  b.C_Xi = 2.0 * std::max(sup, 0.0);
  b.C_Xi_calibrated = true;
  return sup;
}

double agmon_ratio(const Hamiltonian& h, const Field& u) {
  if (u.norm() == 0.0) return 0.0;
  double hu = h.apply_H(u).norm();
  double e = h.energy_norm(u);
  return lp_norm(u, kInf) / std::sqrt(hu * e);
}

ZProductReport z_product_check(const EnhancedNoise3D& n) {
  ZProductReport r;
  Field LZ = bessel(n.Z);
  auto F = [](double w) { return std::exp(2.0 * w); };
  auto dF = [](double w) { return 2.0 * std::exp(2.0 * w); };
  Paralinearization pl = paralinearize(F, dF, n.W);
  Field e2W = pl.para_part + pl.remainder;
  Field de2W = exp_field(n.W, 2.0);
  de2W *= 2.0;
  r.para = para_lo(e2W, LZ) + para_hi(e2W, LZ) + commutator_C(de2W, n.W, LZ) +
           product(de2W, resonant(n.W, LZ)) + resonant(pl.remainder, LZ);
  r.direct = product(e2W, LZ);
  r.para.reality = r.direct.reality = true;
  r.norm_para = holder_norm(r.para, n.alpha - 1);
  r.norm_direct = holder_norm(r.direct, n.alpha - 1);
  double d = r.direct.norm();
  r.rel_diff = d > 0 ? (r.para - r.direct).norm() / d : r.para.norm();
  return r;
}

}  // namespace atorus
