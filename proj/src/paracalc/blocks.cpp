#include <algorithm>
#include "atorus/paracalc.hpp"

namespace atorus {

namespace {

const Grid& zero_grid(const TorusSpec& s) {
  thread_local TorusSpec last{};
  thread_local Grid z;
  if (last != s || z.size() != s.grid_points()) {
    z.assign(s.grid_points(), cplx(0.0, 0.0));
    last = s;
  }
  return z;
}

}  // namespace

BlockGrids::BlockGrids(const Field& f, const DyadicPartition& part) : spec_(f.spec()) {
  const auto& tab = part.table(spec_);
  jmax_ = int(tab.size()) - 2;
  int n = spec_.grid_n;
  blocks_.reserve(jmax_ + 2);
  for (int j = -1; j <= jmax_; ++j) blocks_.push_back(to_grid(multiply_table(f, tab[j + 1]), n));
  lows_.resize(jmax_ + 3);
  lows_[0].assign(spec_.grid_points(), cplx(0.0, 0.0));
  for (int j = 0; j <= jmax_ + 1; ++j) {
    lows_[j + 1] = lows_[j];
    const Grid& b = blocks_[j];  // Delta_{j-1}
    for (std::size_t i = 0; i < b.size(); ++i) lows_[j + 1][i] += b[i];
  }
  full_ = lows_[jmax_ + 2];
}

const Grid& BlockGrids::low(int j) const {
  if (j <= -1) return zero_grid(spec_);
  if (j > jmax_ + 1) return full_;
  return lows_[j + 1];
}

GridAccumulator::GridAccumulator(const TorusSpec& s) : spec_(s), acc_(s.grid_points(), cplx(0.0, 0.0)) {}

void GridAccumulator::add_para(const BlockGrids& f, const BlockGrids& g, cplx coef) {
  if (f.spec() != spec_ || g.spec() != spec_) throw SpecError("add_para: spec mismatch");
  for (int j = 1; j <= g.j_max(); ++j) {
    const Grid& lo = f.low(j - 1);
    const Grid& hi = g.block(j);
    for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] += coef * lo[i] * hi[i];
  }
}

void GridAccumulator::add_resonant(const BlockGrids& f, const BlockGrids& g, cplx coef) {
  if (f.spec() != spec_ || g.spec() != spec_) throw SpecError("add_resonant: spec mismatch");
  int jm = f.j_max();
  Grid nb(acc_.size());
  for (int j = -1; j <= jm; ++j) {
    std::fill(nb.begin(), nb.end(), cplx(0.0, 0.0));
    for (int i = std::max(-1, j - 1); i <= std::min(jm, j + 1); ++i) {
      const Grid& b = g.block(i);
      for (std::size_t p = 0; p < nb.size(); ++p) nb[p] += b[p];
    }
    const Grid& a = f.block(j);
    for (std::size_t p = 0; p < acc_.size(); ++p) acc_[p] += coef * a[p] * nb[p];
  }
}

void GridAccumulator::add_product(const BlockGrids& f, const BlockGrids& g, cplx coef) {
  add_product(f.full(), g.full(), coef);
}

void GridAccumulator::add_product(const Grid& f, const Grid& g, cplx coef) {
  if (f.size() != acc_.size() || g.size() != acc_.size()) throw SpecError("add_product: size mismatch");
  for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] += coef * f[i] * g[i];
}

Field GridAccumulator::finish() const { return from_grid(acc_, spec_.grid_n, spec_); }

}  // namespace atorus
