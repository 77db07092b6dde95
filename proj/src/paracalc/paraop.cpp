#include <cmath>

#include "atorus/paraop.hpp"

namespace atorus {

Field Multiplier::apply(const Field& f) const {
  if (identity()) return f;
  Field out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= t[i];
  out.reality = false;
  return out;
}

Field Multiplier::apply_adjoint(const Field& f) const {
  if (identity()) return f;
  Field out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::conj(t[i]);
  out.reality = false;
  return out;
}

Multiplier mult_identity() { return {}; }

Multiplier mult_deriv(const TorusSpec& s, int axis) {
  const Lattice& lat = lattice(s);
  Multiplier m{"d" + std::to_string(axis), std::vector<cplx>(s.size())};
  for (std::size_t i = 0; i < s.size(); ++i) m.t[i] = cplx(0.0, kTwoPi * lat.k[i][axis]);
  return m;
}

Multiplier mult_laplacian(const TorusSpec& s) {
  const Lattice& lat = lattice(s);
  Multiplier m{"lap", std::vector<cplx>(s.size())};
  for (std::size_t i = 0; i < s.size(); ++i) m.t[i] = -kFourPi2 * lat.k2[i];
  return m;
}

Multiplier mult_bessel_inv(const TorusSpec& s) {
  const Lattice& lat = lattice(s);
  Multiplier m{"Linv", std::vector<cplx>(s.size())};
  for (std::size_t i = 0; i < s.size(); ++i) m.t[i] = 1.0 / (1.0 + kFourPi2 * lat.k2[i]);
  return m;
}

Multiplier mult_cut(const TorusSpec& s, int N, Side side) {
  const Lattice& lat = lattice(s);
  double r2 = std::ldexp(1.0, 2 * N);
  Multiplier m{(side == Side::above ? "hi" : "lo") + std::to_string(N), std::vector<cplx>(s.size())};
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool above = lat.k2[i] > r2;
    m.t[i] = (above == (side == Side::above)) ? 1.0 : 0.0;
  }
  return m;
}

Multiplier compose(const Multiplier& a, const Multiplier& b) {
  if (a.identity()) return b;
  if (b.identity()) return a;
  Multiplier m{a.id + "*" + b.id, a.t};
  for (std::size_t i = 0; i < m.t.size(); ++i) m.t[i] *= b.t[i];
  return m;
}

ParaOperator::ParaOperator(const TorusSpec& s, const DyadicPartition& part) : spec_(s), part_(&part) {
  const auto& tab = part.table(s);
  int jm = int(tab.size()) - 2;
  low_tab_.assign(jm + 1, std::vector<double>(s.size(), 0.0));
  // low_tab_[j] = S_{j-1} = sum_{i=-1}^{j-2} Delta_i
  for (int j = 1; j <= jm; ++j) {
    low_tab_[j] = low_tab_[j - 1];
    for (std::size_t p = 0; p < s.size(); ++p) low_tab_[j][p] += tab[j - 1][p];
  }
  mult_[""] = mult_identity();
}

int ParaOperator::add_field(const Field& g) {
  if (g.spec() != spec_) throw SpecError("ParaOperator::add_field: spec mismatch");
  g_.push_back(std::make_unique<BlockGrids>(g, *part_));
  return int(g_.size()) - 1;
}

void ParaOperator::add(Kind kind, const Multiplier& pre, int g, const Multiplier& post, cplx coef) {
  if (g < 0 || g >= int(g_.size())) throw std::out_of_range("ParaOperator::add: bad field id");
  mult_.emplace(pre.id, pre);
  mult_.emplace(post.id, post);
  terms_.push_back({kind, pre.id, post.id, g, coef});
}

Field ParaOperator::apply(const Field& f) const {
  if (f.spec() != spec_) throw SpecError("ParaOperator::apply: spec mismatch");
  std::map<std::string, BlockGrids> fb;
  std::map<std::string, GridAccumulator> acc;
  for (const Term& t : terms_) {
    auto it = fb.find(t.pre);
    if (it == fb.end()) it = fb.emplace(t.pre, BlockGrids(mult_.at(t.pre).apply(f), *part_)).first;
    auto ac = acc.find(t.post);
    if (ac == acc.end()) ac = acc.emplace(t.post, GridAccumulator(spec_)).first;
    if (t.kind == Kind::lo)
      ac->second.add_para(it->second, *g_[t.g], t.coef);
    else
      ac->second.add_para(*g_[t.g], it->second, t.coef);
  }
  Field out(spec_);
  for (auto& [post, a] : acc) out += mult_.at(post).apply(a.finish());
  out = outer_.apply(out);
  out.reality = false;
  return out;
}

Field ParaOperator::adjoint(const Field& h) const {
  if (h.spec() != spec_) throw SpecError("ParaOperator::adjoint: spec mismatch");
  const auto& tab = part_->table(spec_);
  int jm = int(tab.size()) - 2;
  int n = spec_.grid_n;
  std::size_t npts = spec_.grid_points();
  Field h1 = outer_.apply_adjoint(h);

  // group terms by (post, pre, kind)
  std::map<std::tuple<std::string, std::string, int>, std::vector<const Term*>> groups;
  for (const Term& t : terms_) groups[{t.post, t.pre, int(t.kind)}].push_back(&t);

  std::map<std::string, Field> by_pre;
  std::map<std::string, Grid> hgrid;
  for (auto& [key, ts] : groups) {
    const auto& [post, pre, kind] = key;
    auto hg = hgrid.find(post);
    if (hg == hgrid.end()) hg = hgrid.emplace(post, to_grid(mult_.at(post).apply_adjoint(h1), n)).first;
    Field res(spec_);
    Grid work(npts);
    for (int j = 1; j <= jm; ++j) {
      std::fill(work.begin(), work.end(), cplx(0.0, 0.0));
      for (const Term* t : ts) {
        // lo: adjoint of f -> S_{j-1}f D_j g is h -> S_{j-1} P_K(conj(D_j g) h)
        // hi: adjoint of f -> S_{j-1}g D_j f is h -> D_j P_K(conj(S_{j-1} g) h)
        const Grid& gg = (kind == int(Kind::lo)) ? g_[t->g]->block(j) : g_[t->g]->low(j - 1);
        cplx c = std::conj(t->coef);
        for (std::size_t p = 0; p < npts; ++p) work[p] += c * std::conj(gg[p]);
      }
      for (std::size_t p = 0; p < npts; ++p) work[p] *= hg->second[p];
      Field part = from_grid(work, n, spec_);
      const std::vector<double>& w = (kind == int(Kind::lo)) ? low_tab_[j] : tab[j + 1];
      for (std::size_t p = 0; p < part.size(); ++p) res[p] += w[p] * part[p];
    }
    auto bp = by_pre.find(pre);
    if (bp == by_pre.end())
      by_pre.emplace(pre, res);
    else
      bp->second += res;
  }
  Field out(spec_);
  for (auto& [pre, r] : by_pre) out += mult_.at(pre).apply_adjoint(r);
  out.reality = false;
  return out;
}

}  // namespace atorus
