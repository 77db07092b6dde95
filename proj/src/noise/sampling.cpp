#include <cmath>
#include <random>
#include <stdexcept>

#include "atorus/noise.hpp"

namespace atorus {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mode_seed(std::uint64_t seed, const KVec& k) {
  std::uint64_t h = splitmix64(seed);
  for (int a = 0; a < 3; ++a) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k[a])));
  return h;
}

// lexicographically positive representative of {k, -k}
bool is_positive(const KVec& k) {
  for (int a = 0; a < 3; ++a) {
    if (k[a] > 0) return true;
    if (k[a] < 0) return false;
  }
  return false;
}

}  // namespace

Mollifier bump_mollifier() {
  return {"bump", 1.0, [](double x) { return std::exp(1.0 - 1.0 / (1.0 - x * x)); }};
}

Mollifier cosine_mollifier() {
  return {"cosine", 1.0,
          [](double x) { return std::cos(0.5 * kPi * x) * std::exp(0.5 * (1.0 - 1.0 / (1.0 - x * x))); }};
}

Mollifier zero_mollifier() {
  return {"zero", 0.0, [](double) { return 0.0; }};
}

Mollifier identity_mollifier() {
  return {"identity", kInf, [](double) { return 1.0; }};
}

Mollifier mollifier_by_id(const std::string& id) {
  if (id == "bump") return bump_mollifier();
  if (id == "cosine") return cosine_mollifier();
  if (id == "zero") return zero_mollifier();
  if (id == "identity") return identity_mollifier();
  throw std::invalid_argument("unknown mollifier id '" + id + "'");
}

Field sample_white_noise(std::uint64_t seed, const TorusSpec& spec) {
  const Lattice& lat = lattice(spec);
  Field xi(spec);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const KVec& k = lat.k[i];
    if (!is_positive(k)) continue;
    std::mt19937_64 rng(mode_seed(seed, k));
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    double re = nd(rng);
    double im = nd(rng);
    xi[i] = cplx(re, im);
    xi[lat.neg[i]] = cplx(re, -im);
  }
  if (spec.dim == 2) {
    std::mt19937_64 rng(mode_seed(seed, {0, 0, 0}));
    std::normal_distribution<double> nd(0.0, 1.0);
    xi[lat.zero] = nd(rng);
  }
  xi.reality = true;
  xi.zero_mode_excluded = spec.dim == 3;
  return xi;
}

Field mollify(const Field& xi, double eps, const Mollifier& m) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollify: eps must be > 0");
  const Lattice& lat = lattice(xi.spec());
  Field out = xi;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= m(eps * std::sqrt(lat.k2[i]));
  return out;
}

bool mollifier_truncated(double eps, const Mollifier& m, int K) {
  // nearest lattice point outside the cube is at distance K+1
  return m.support / eps > K + 1;
}

}  // namespace atorus
