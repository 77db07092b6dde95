#include "atorus/paracalc.hpp"

namespace atorus {

Field commutator_C(const Field& f, const Field& g, const Field& h, const DyadicPartition& part) {
  require_same_spec(f, g, "commutator_C");
  require_same_spec(f, h, "commutator_C");
  Field a = resonant(para_lo(f, g, part), h, part);
  a -= product(f, resonant(g, h, part));
  a.reality = f.reality && g.reality && h.reality;
  return a;
}

Field commutator_CN(const Field& f, const Field& g, const Field& h, int N, const DyadicPartition& part) {
  require_same_spec(f, g, "commutator_CN");
  require_same_spec(f, h, "commutator_CN");
  Field a = resonant(freq_cutoff(para_lo(f, g, part), N, Side::above), h, part);
  a -= product(f, resonant(g, h, part));
  a.reality = f.reality && g.reality && h.reality;
  return a;
}

cplx pairing(const Field& a, const Field& b) {
  require_same_spec(a, b, "pairing");
  const Lattice& lat = lattice(a.spec());
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[lat.neg[i]];
  return s;
}

cplx adjoint_defect_D(const Field& f, const Field& g, const Field& h, const DyadicPartition& part) {
  require_same_spec(f, g, "adjoint_defect_D");
  require_same_spec(f, h, "adjoint_defect_D");
  return pairing(f, resonant(h, g, part)) - pairing(para_lo(f, g, part), h);
}

Field para_resolvent_R(const Field& f, const Field& g, const DyadicPartition& part) {
  require_same_spec(f, g, "para_resolvent_R");
  Field r = bessel_inv(para_lo(f, g, part));
  r -= para_lo(f, bessel_inv(g), part);
  r.reality = f.reality && g.reality;
  return r;
}

}  // namespace atorus
