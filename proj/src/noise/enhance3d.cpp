#include <cmath>
#include <limits>
#include <stdexcept>

#include "atorus/noise.hpp"

namespace atorus {

namespace {

Field shift_zero(Field f, double c) {
  f[lattice(f.spec()).zero] -= c;
  return f;
}

}  // namespace

void derive_3d(EnhancedNoise3D& n) {
  n.W = n.X + n.X1 + n.X2;
  n.W.reality = true;
  n.Wt = gradient(n.W);
  for (Field& w : n.Wt) w = bessel_inv(w);
  auto g1 = gradient(n.X1);
  auto g2 = gradient(n.X2);
  Field inner = dot(g2, g2) + 2.0 * dot(g1, g2) + n.X1 + n.X2;
  n.Z = bessel_inv(inner) + n.X4 + 2.0 * n.X3;
  n.Z.reality = true;
}

EnhancedNoise3D enhance_3d(const Field& xi_raw, std::uint64_t seed, double eps, const Mollifier& m,
                           C2Mode mode, double alpha) {
  const TorusSpec& s = xi_raw.spec();
  if (s.dim != 3) throw SpecError("enhance_3d: dim must be 3");
  EnhancedNoise3D n;
  n.eps = eps;
  n.seed = seed;
  n.mollifier_id = m.id;
  n.c2_mode = mode;
  n.alpha = alpha;
  n.xi = mollify(xi_raw, eps, m);
  n.xi[lattice(s).zero] = 0.0;
  n.xi.reality = true;
  n.xi.zero_mode_excluded = true;

  Renorm3D r = renorm_const_3d(eps, m, s.K, mode);
  n.c1 = r.c1;
  n.c2 = r.c2;
  n.truncated = r.truncated;

  n.X = neg_laplacian_inv(n.xi);
  auto gX = gradient(n.X);
  n.X1 = bessel_inv(shift_zero(dot(gX, gX), n.c1));
  auto gX1 = gradient(n.X1);
  n.X2 = 2.0 * bessel_inv(dot(gX, gX1));
  auto gX2 = gradient(n.X2);
  n.X3 = bessel_inv(dot(gX, gX2));
  n.X4 = bessel_inv(shift_zero(dot(gX1, gX1), n.c2));
  auto gX3 = gradient(n.X3);
  n.gradX_res_gradX3 = Field(s);
  for (int i = 0; i < 3; ++i) n.gradX_res_gradX3 += resonant(gX[i], gX3[i]);
  for (Field* f : {&n.X, &n.X1, &n.X2, &n.X3, &n.X4, &n.gradX_res_gradX3}) f->reality = true;
  derive_3d(n);

  const double a = alpha;
  n.norms = {holder_norm(n.X, a),          holder_norm(n.X1, 2 * a),
             holder_norm(n.X2, a + 1),     holder_norm(n.X3, a + 1),
             holder_norm(n.X4, 4 * a),     holder_norm(n.gradX_res_gradX3, 2 * a - 1)};
  return n;
}

EnhancedNoise3D enhance_3d(std::uint64_t seed, double eps, const Mollifier& m, const TorusSpec& spec,
                           C2Mode mode, double alpha) {
  return enhance_3d(sample_white_noise(seed, spec), seed, eps, m, mode, alpha);
}

namespace {

Grid grid_exp(const Grid& g, double sign) {
  Grid out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::exp(sign * g[i].real());
  return out;
}

double grid_max_abs(const Grid& g) {
  double m = 0;
  for (const cplx& v : g) m = std::max(m, std::abs(v.real()));
  return m;
}

}  // namespace

Field exp_field(const Field& f, double sign) {
  Grid g = dft_inverse(f);
  if (grid_max_abs(g) > 700.0) throw NumericalError("exp_field: exponent overflow");
  Field out = dft_forward(grid_exp(g, sign), f.spec());
  out.reality = true;
  return out;
}

Field exp_multiply(const Grid& expgrid, const Field& u) {
  Grid g = dft_inverse(u);
  if (g.size() != expgrid.size()) throw SpecError("exp_multiply: grid size mismatch");
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= expgrid[i];
  Field out = dft_forward(g, u.spec());
  out.reality = u.reality;
  return out;
}

ExpLift exp_lift(const EnhancedNoise3D& n) {
  ExpLift e;
  Grid w = dft_inverse(n.W);
  if (grid_max_abs(w) > 700.0) throw NumericalError("exp_lift: max |W| exceeds 700");
  e.expW = grid_exp(w, 1.0);
  e.expmW = grid_exp(w, -1.0);
  const TorusSpec& s = n.W.spec();
  e.eX = exp_field(n.X);
  e.eX1 = exp_field(n.X1);
  e.eX2 = exp_field(n.X2);
  e.eW = dft_forward(e.expW, s);
  e.emW = dft_forward(e.expmW, s);
  e.e2W = dft_forward(grid_exp(w, 2.0), s);
  for (Field* f : {&e.eW, &e.emW, &e.e2W}) f->reality = true;
  return e;
}

}  // namespace atorus
