#include <stdexcept>

#include "atorus/noise.hpp"

namespace atorus {

EnhancedNoise2D enhance_2d(const Field& xi_raw, std::uint64_t seed, double eps, const Mollifier& m,
                           double alpha) {
  const TorusSpec& s = xi_raw.spec();
  if (s.dim != 2) throw SpecError("enhance_2d: dim must be 2");
  EnhancedNoise2D n;
  n.eps = eps;
  n.seed = seed;
  n.mollifier_id = m.id;
  n.alpha = alpha;
  n.xi = mollify(xi_raw, eps, m);
  n.xi.reality = true;
  n.X = bessel_inv(n.xi);
  n.c_eps = renorm_const_2d(eps, m, s.K, &n.truncated);
  n.Xi2 = resonant(n.xi, n.X);
  n.Xi2[lattice(s).zero] -= n.c_eps;
  n.Xi2.reality = true;
  n.norm_xi = holder_norm(n.xi, alpha);
  n.norm_Xi2 = holder_norm(n.Xi2, 2.0 * alpha + 2.0);
  return n;
}

EnhancedNoise2D enhance_2d(std::uint64_t seed, double eps, const Mollifier& m, const TorusSpec& spec,
                           double alpha) {
  return enhance_2d(sample_white_noise(seed, spec), seed, eps, m, alpha);
}

}  // namespace atorus
