#include <cmath>

#include "atorus/anderson3d.hpp"

namespace atorus {

OperatorBundle3D shift_and_bundle_3d(const EnhancedNoise3D& noise, const BundleOptions& opt) {
  if (!(opt.margin > 0)) throw std::invalid_argument("shift_and_bundle_3d: margin must be > 0");
  OperatorBundle3D b;
  b.noise = std::make_shared<const EnhancedNoise3D>(noise);
  b.N = opt.N_override >= 0 ? opt.N_override : choose_N_3d(noise, opt.target);
  b.pc = std::make_shared<const Paracontrolled3D>(b.noise, b.N);
  bool dense = opt.dense && noise.xi.spec().size() <= kMaxDenseRows;
  b.ham = Hamiltonian(noise.xi, noise.c1 + noise.c2, dense);
  b.margin = opt.margin;
  b.lambda_max = b.ham.lambda_max();
  b.ham.K_Xi = opt.K_Xi_override ? *opt.K_Xi_override : b.lambda_max + opt.margin;
  double m = 0;
  for (const cplx& e : b.pc->lift().expmW) m = std::max(m, e.real() * e.real());
  b.exp_m2W_sup = m;
  return b;
}

Field resolvent_apply_3d(const OperatorBundle3D& b, const Field& f, Hamiltonian::Route via) {
  return b.ham.resolvent(f, via);
}

LadderTable resolvent_ladder_3d(const std::vector<std::shared_ptr<const EnhancedNoise3D>>& rungs,
                                const std::vector<Field>& fs, double beta, double margin) {
  std::vector<Field> V;
  std::vector<double> c, eps;
  for (const auto& r : rungs) {
    V.push_back(r->xi);
    c.push_back(r->c1 + r->c2);
    eps.push_back(r->eps);
  }
  return resolvent_ladder(V, c, eps, fs, beta, margin);
}

}  // namespace atorus
