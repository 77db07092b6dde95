#include <algorithm>
#include <tuple>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "atorus/spectral.hpp"

namespace atorus {

namespace {

double bump(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

}  // namespace

double DyadicPartition::theta(double r) const {
  if (r <= r_inner) return 1.0;
  if (r >= r_chi) return 0.0;
  double s = (r - r_inner) / (r_chi - r_inner);
  double a = bump(s);
  double b = bump(1.0 - s);
  return a / (a + b);
}

double DyadicPartition::weight(int j, double r) const {
  if (j < 0) return chi(r);
  return rho(std::ldexp(r, -j));
}

int DyadicPartition::j_max(const TorusSpec& s) const {
  // last j whose annulus [a 2^j, b 2^j] meets |k| <= kmax
  double km = s.kmax();
  int j = 0;
  while (annulus_a * std::ldexp(1.0, j + 1) < km) ++j;
  return j;
}

const std::vector<std::vector<double>>& DyadicPartition::table(const TorusSpec& s) const {
  static std::mutex mu;
  static std::map<std::tuple<const void*, int, int>, std::unique_ptr<std::vector<std::vector<double>>>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(static_cast<const void*>(this), s.dim, s.K);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  const Lattice& lat = lattice(s);
  int jm = j_max(s);
  auto t = std::make_unique<std::vector<std::vector<double>>>(jm + 2,
                                                              std::vector<double>(s.size(), 0.0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    double r = std::sqrt(lat.k2[i]);
    for (int j = -1; j <= jm; ++j) (*t)[j + 1][i] = weight(j, r);
  }
  const auto& ref = *t;
  cache.emplace(key, std::move(t));
  return ref;
}

const DyadicPartition& default_partition() {
  static const DyadicPartition p;
  return p;
}

Field lp_block(const Field& f, int j, const DyadicPartition& part) {
  if (j < -1) throw SpecError("lp_block: j must be >= -1");
  const auto& tab = part.table(f.spec());
  if (j + 1 >= int(tab.size())) {
    Field z(f.spec());
    z.reality = f.reality;
    return z;
  }
  Field g = multiply_table(f, tab[j + 1]);
  return g;
}

Field lp_low(const Field& f, int j, const DyadicPartition& part) {
  const auto& tab = part.table(f.spec());
  Field g(f.spec());
  g.reality = f.reality;
  int top = std::min<int>(j - 1, int(tab.size()) - 2);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double w = 0.0;
    for (int b = -1; b <= top; ++b) w += tab[b + 1][i];
    g[i] = w * f[i];
  }
  return g;
}

Field freq_cutoff(const Field& f, int N, Side side) {
  if (N < 0) throw SpecError("freq_cutoff: N must be >= 0");
  const Lattice& lat = lattice(f.spec());
  double r2 = std::ldexp(1.0, 2 * N);
  Field g = f;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool high = lat.k2[i] > r2;
    if (high != (side == Side::above)) g[i] = 0.0;
  }
  return g;
}

}  // namespace atorus
