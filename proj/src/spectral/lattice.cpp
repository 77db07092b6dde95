#include "atorus/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace atorus {

namespace {

bool seven_smooth(int n) {
  for (int p : {2, 3, 5, 7})
    while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace

int dealias_grid(int K) {
  int n = 3 * K + 1;
  while (n % 2 != 0 || !seven_smooth(n)) ++n;
  return n;
}

TorusSpec TorusSpec::make(int dim, int K, int grid_n) {
  TorusSpec s;
  s.dim = dim;
  s.K = K;
  s.grid_n = grid_n > 0 ? grid_n : dealias_grid(K);
  s.validate();
  return s;
}

void TorusSpec::validate() const {
  if (dim != 2 && dim != 3) throw SpecError("TorusSpec: dim must be 2 or 3");
  if (K < 4) throw SpecError("TorusSpec: K must be >= 4");
  if (grid_n < 2 * K + 1) throw SpecError("TorusSpec: grid_n must be >= 2K+1");
  if (grid_n % 2 != 0) throw SpecError("TorusSpec: grid_n must be even");
}

std::size_t TorusSpec::size() const {
  std::size_t L = static_cast<std::size_t>(side());
  return dim == 2 ? L * L : L * L * L;
}

std::size_t TorusSpec::grid_points() const {
  std::size_t n = static_cast<std::size_t>(grid_n);
  return dim == 2 ? n * n : n * n * n;
}

std::size_t TorusSpec::index(const KVec& k) const {
  std::size_t L = static_cast<std::size_t>(side());
  std::size_t i = static_cast<std::size_t>(k[0] + K) * L + static_cast<std::size_t>(k[1] + K);
  if (dim == 3) i = i * L + static_cast<std::size_t>(k[2] + K);
  return i;
}

KVec TorusSpec::k_of(std::size_t idx) const {
  int L = side();
  KVec k{0, 0, 0};
  if (dim == 3) {
    k[2] = static_cast<int>(idx % L) - K;
    idx /= L;
  }
  k[1] = static_cast<int>(idx % L) - K;
  k[0] = static_cast<int>(idx / L) - K;
  return k;
}

bool TorusSpec::contains(const KVec& k) const {
  for (int a = 0; a < dim; ++a)
    if (k[a] < -K || k[a] > K) return false;
  if (dim == 2 && k[2] != 0) return false;
  return true;
}

double TorusSpec::kmax() const { return K * std::sqrt(static_cast<double>(dim)); }

std::string to_string(const TorusSpec& s) {
  std::ostringstream os;
  os << "d=" << s.dim << " K=" << s.K << " n=" << s.grid_n;
  return os.str();
}

const Lattice& lattice(const TorusSpec& s) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Lattice>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(s.dim, s.K);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto lat = std::make_unique<Lattice>();
  lat->dim = s.dim;
  lat->K = s.K;
  std::size_t M = s.size();
  lat->k.resize(M);
  lat->k2.resize(M);
  lat->neg.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    KVec k = s.k_of(i);
    lat->k[i] = k;
    lat->k2[i] = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
    lat->neg[i] = s.index({-k[0], -k[1], -k[2]});
  }
  lat->zero = s.index({0, 0, 0});
  const Lattice& ref = *lat;
  cache.emplace(key, std::move(lat));
  return ref;
}

}  // namespace atorus
