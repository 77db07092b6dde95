#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "atorus/spectral.hpp"

namespace atorus {

namespace {

// FFTW planning is not thread safe; execution with the new-array API is.
fftw_plan get_plan(int dim, int n, int sign) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(dim, n, sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  int dims[3] = {n, n, n};
  std::size_t total = dim == 2 ? std::size_t(n) * n : std::size_t(n) * n * n;
  fftw_complex* buf = fftw_alloc_complex(total);
  fftw_plan p = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  plans.emplace(key, p);
  return p;
}

inline int wrap(int k, int n) { return k >= 0 ? k : k + n; }

}  // namespace

Grid to_grid(const Field& f, int n) {
  const TorusSpec& s = f.spec();
  if (n < 2 * s.K + 1) throw SpecError("to_grid: grid too small for lattice");
  std::size_t total = s.dim == 2 ? std::size_t(n) * n : std::size_t(n) * n * n;
  Grid g(total, cplx(0.0, 0.0));
  const Lattice& lat = lattice(s);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const KVec& k = lat.k[i];
    std::size_t j = std::size_t(wrap(k[0], n)) * n + std::size_t(wrap(k[1], n));
    if (s.dim == 3) j = j * n + std::size_t(wrap(k[2], n));
    g[j] = f[i];
  }
  fftw_plan p = get_plan(s.dim, n, FFTW_BACKWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(g.data());
  fftw_execute_dft(p, ptr, ptr);
  return g;
}

Field from_grid(const Grid& g_in, int n, const TorusSpec& s) {
  std::size_t total = s.dim == 2 ? std::size_t(n) * n : std::size_t(n) * n * n;
  if (g_in.size() != total) throw SpecError("from_grid: grid size does not match n^d");
  if (n < 2 * s.K + 1) throw SpecError("from_grid: grid too small for lattice");
  Grid g = g_in;
  fftw_plan p = get_plan(s.dim, n, FFTW_FORWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(g.data());
  fftw_execute_dft(p, ptr, ptr);
  Field f(s);
  const Lattice& lat = lattice(s);
  double scale = 1.0 / double(total);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const KVec& k = lat.k[i];
    std::size_t j = std::size_t(wrap(k[0], n)) * n + std::size_t(wrap(k[1], n));
    if (s.dim == 3) j = j * n + std::size_t(wrap(k[2], n));
    f[i] = g[j] * scale;
  }
  return f;
}

Grid dft_inverse(const Field& f) { return to_grid(f, f.spec().grid_n); }

Field dft_forward(const Grid& g, const TorusSpec& s) { return from_grid(g, s.grid_n, s); }

}  // namespace atorus
