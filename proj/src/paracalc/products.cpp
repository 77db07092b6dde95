#include <cmath>
#include <random>

#include "atorus/paracalc.hpp"

namespace atorus {

ProductTriple paraproduct(const Field& f, const Field& g, const DyadicPartition& part) {
  require_same_spec(f, g, "paraproduct");
  BlockGrids bf(f, part), bg(g, part);
  GridAccumulator lo(f.spec()), res(f.spec()), hi(f.spec());
  lo.add_para(bf, bg);
  res.add_resonant(bf, bg);
  hi.add_para(bg, bf);
  ProductTriple t{lo.finish(), res.finish(), hi.finish()};
  bool real = f.reality && g.reality;
  t.lo_hi.reality = t.resonant.reality = t.hi_lo.reality = real;
  return t;
}

Field para_lo(const Field& f, const Field& g, const DyadicPartition& part) {
  require_same_spec(f, g, "para_lo");
  BlockGrids bf(f, part), bg(g, part);
  GridAccumulator acc(f.spec());
  acc.add_para(bf, bg);
  Field out = acc.finish();
  out.reality = f.reality && g.reality;
  return out;
}

Field para_hi(const Field& f, const Field& g, const DyadicPartition& part) { return para_lo(g, f, part); }

Field resonant(const Field& f, const Field& g, const DyadicPartition& part) {
  require_same_spec(f, g, "resonant");
  BlockGrids bf(f, part), bg(g, part);
  GridAccumulator acc(f.spec());
  acc.add_resonant(bf, bg);
  Field out = acc.finish();
  out.reality = f.reality && g.reality;
  return out;
}

Field para_hi_eq(const Field& f, const Field& g, const DyadicPartition& part) {
  require_same_spec(f, g, "para_hi_eq");
  BlockGrids bf(f, part), bg(g, part);
  GridAccumulator acc(f.spec());
  acc.add_para(bg, bf);
  acc.add_resonant(bf, bg);
  Field out = acc.finish();
  out.reality = f.reality && g.reality;
  return out;
}

Paralinearization paralinearize(const std::function<double(double)>& F,
                                const std::function<double(double)>& dF, const Field& f,
                                const DyadicPartition& part) {
  if (f.reality_defect() > 1e-10) throw SpecError("paralinearize: field must be real");
  const TorusSpec& s = f.spec();
  Grid g = dft_inverse(f);
  Grid Fg(g.size()), dFg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double x = g[i].real();
    double a = F(x), b = dF(x);
    if (!std::isfinite(a) || !std::isfinite(b))
      throw SpecError("paralinearize: F or F' not finite at an attained value");
    Fg[i] = a;
    dFg[i] = b;
  }
  Field Ff = dft_forward(Fg, s);
  Field dFf = dft_forward(dFg, s);
  Ff.enforce_reality();
  dFf.enforce_reality();
  Paralinearization out;
  out.para_part = para_lo(dFf, f, part);
  out.remainder = Ff - out.para_part;
  return out;
}

Field rough_field(const TorusSpec& spec, double s, std::uint64_t seed, double sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  const Lattice& lat = lattice(spec);
  Field f(spec);
  int d = spec.dim;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::size_t j = lat.neg[i];
    if (j < i) continue;
    double w = sigma / std::pow(1.0 + std::sqrt(lat.k2[i]), s + 0.5 * d);
    if (j == i) {
      f[i] = w * std::sqrt(2.0) * nd(rng);
    } else {
      cplx z(nd(rng), nd(rng));
      f[i] = w * z;
      f[j] = std::conj(f[i]);
    }
  }
  f.reality = true;
  return f;
}

Field smooth_field(const TorusSpec& spec, int band, std::uint64_t seed, double sigma) {
  Field f = rough_field(spec, 1.0, seed, sigma);
  const Lattice& lat = lattice(spec);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const KVec& k = lat.k[i];
    if (std::abs(k[0]) > band || std::abs(k[1]) > band || std::abs(k[2]) > band) f[i] = 0.0;
  }
  return f;
}

}  // namespace atorus
