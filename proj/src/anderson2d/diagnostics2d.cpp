#include <cmath>

#include "atorus/anderson2d.hpp"

namespace atorus {

namespace {

double grad_sq(const Field& f) {
  const Lattice& lat = lattice(f.spec());
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += kFourPi2 * lat.k2[i] * std::norm(f[i]);
  return s;
}

double form_ratio(const OperatorBundle2D& b, const ParacontrolledPair& p) {
  double uu = p.u.norm() * p.u.norm();
  double uAu = p.u.inner(b.pc->apply_A(p)).real();
  return (0.5 * grad_sq(p.u_sharp) + uAu) / uu;
}

}  // namespace

double lower_bound_check(const OperatorBundle2D& b, const ParacontrolledPair& p) {
  if (!b.C_Xi_calibrated) throw std::logic_error("lower_bound_check: C_Xi not calibrated");
  double uu = p.u.norm() * p.u.norm();
  double uAu = p.u.inner(b.pc->apply_A(p)).real();
  return -uAu + b.C_Xi * uu - 0.5 * grad_sq(p.u_sharp);
}

double calibrate_C_Xi(OperatorBundle2D& b, const std::vector<ParacontrolledPair>& samples) {
  double sup = -kInf;
  for (const auto& p : samples) {
    if (p.u.norm() == 0.0) continue;
    sup = std::max(sup, form_ratio(b, p));
  }
  if (!std::isfinite(sup)) throw std::invalid_argument("calibrate_C_Xi: no nonzero samples");
  b.C_Xi = 2.0 * std::max(sup, 0.0);
  b.C_Xi_calibrated = true;
  return sup;
}

IneqReport functional_ineq_report(const Hamiltonian& h, const std::vector<Field>& samples) {
  IneqReport r;
  for (const Field& u : samples) {
    if (u.norm() == 0.0) continue;
    double e = h.energy_norm(u);
    double hu = h.apply_H(u).norm();
    double inf = lp_norm(u, kInf);
    r.max_bg = std::max(r.max_bg, inf / (e * std::sqrt(1.0 + std::log(1.0 + hu))));
    r.max_l4 = std::max(r.max_l4, lp_norm(u, 4) / e);
    r.max_l6 = std::max(r.max_l6, lp_norm(u, 6) / e);
    r.max_linf_h = std::max(r.max_linf_h, inf / hu);
    ++r.samples;
  }
  return r;
}

}  // namespace atorus
