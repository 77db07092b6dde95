#include <algorithm>
#include <cmath>

#include "atorus/spectral.hpp"

namespace atorus {

namespace {

double grid_lp(const Grid& g, double p) {
  if (p < 1.0) throw SpecError("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : g) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (const auto& v : g) s += std::pow(std::abs(v), p);
  return std::pow(s / double(g.size()), 1.0 / p);
}

}  // namespace

double lp_norm(const Field& f, double p) {
  if (p == 2.0) return f.norm();
  return grid_lp(dft_inverse(f), p);
}

double NormReport::recompute() const {
  if (std::isinf(q)) {
    double m = 0.0;
    for (auto [j, v] : per_block) m = std::max(m, std::pow(2.0, j * alpha) * v);
    return m;
  }
  double s = 0.0;
  for (auto [j, v] : per_block) s += std::pow(2.0, j * q * alpha) * std::pow(v, q);
  return std::pow(s, 1.0 / q);
}

NormReport besov_norm(const Field& f, double alpha, double p, double q, const DyadicPartition& part) {
  if (p < 1.0 || q < 1.0) throw SpecError("besov_norm: p and q must be >= 1");
  NormReport r;
  r.alpha = alpha;
  r.p = p;
  r.q = q;
  int jm = part.j_max(f.spec());
  for (int j = -1; j <= jm; ++j) r.per_block.emplace_back(j, lp_norm(lp_block(f, j, part), p));
  r.value = r.recompute();
  return r;
}

double holder_norm(const Field& f, double alpha, const DyadicPartition& part) {
  return besov_norm(f, alpha, kInf, kInf, part).value;
}

double sobolev_norm(const Field& f, double alpha) {
  const Lattice& lat = lattice(f.spec());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(1.0 + lat.k2[i], alpha) * std::norm(f[i]);
  return std::sqrt(s);
}

double bernstein_check(const Field& f, int j, int k_deriv, double p, double q,
                       const DyadicPartition& part) {
  if (k_deriv < 0) throw SpecError("bernstein_check: negative derivative order");
  const auto& tab = part.table(f.spec());
  double scale = f.max_abs();
  for (std::size_t i = 0; i < f.size(); ++i) {
    double w = (j + 1 < int(tab.size())) ? tab[j + 1][i] : 0.0;
    if (w == 0.0 && std::abs(f[i]) > 1e-12 * scale)
      throw SpecError("bernstein_check: field not supported in block j");
  }
  double fp = lp_norm(f, p);
  if (fp == 0.0) return 0.0;
  int d = f.spec().dim;
  // enumerate multi-indices of order k_deriv
  double best = 0.0;
  std::vector<int> mu(d, 0);
  auto visit = [&](auto&& self, int axis, int left) -> void {
    if (axis == d - 1) {
      mu[axis] = left;
      Field g = f;
      for (int a = 0; a < d; ++a)
        for (int m = 0; m < mu[a]; ++m) g = deriv(g, a);
      best = std::max(best, lp_norm(g, q));
      return;
    }
    for (int m = 0; m <= left; ++m) {
      mu[axis] = m;
      self(self, axis + 1, left - m);
    }
  };
  visit(visit, 0, k_deriv);
  double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  double lambda = std::ldexp(1.0, j);
  return best / (std::pow(lambda, k_deriv + d * (inv_p - inv_q)) * fp);
}

}  // namespace atorus
