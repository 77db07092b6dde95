#include <cmath>

#include "doctest.h"
#include "atorus/paracalc.hpp"

using namespace atorus;

namespace {

// f < g from separately computed blocks and exact products
Field para_lo_direct(const Field& f, const Field& g) {
  int jm = default_partition().j_max(f.spec());
  Field out(f.spec());
  for (int j = 1; j <= jm; ++j) out += product(lp_low(f, j - 1), lp_block(g, j));
  return out;
}

Field resonant_direct(const Field& f, const Field& g) {
  int jm = default_partition().j_max(f.spec());
  Field out(f.spec());
  for (int i = -1; i <= jm; ++i)
    for (int j = std::max(-1, i - 1); j <= std::min(jm, i + 1); ++j)
      out += product(lp_block(f, i), lp_block(g, j));
  return out;
}

// D(f,g,h) = sum_{i >= k-1, |j-k| <= 1} - sum_{i <= k-2, 1 < |j-k| <= L} of (D_i f, D_j h D_k g)
cplx defect_block_sum(const Field& f, const Field& g, const Field& h, int L) {
  int jm = default_partition().j_max(f.spec());
  cplx s = 0;
  for (int k = -1; k <= jm; ++k) {
    Field gk = lp_block(g, k);
    for (int j = std::max(-1, k - L); j <= std::min(jm, k + L); ++j) {
      Field hg = product(lp_block(h, j), gk);
      for (int i = -1; i <= jm; ++i) {
        bool near = std::abs(j - k) <= 1;
        if (near && i >= k - 1)
          s += pairing(lp_block(f, i), hg);
        else if (!near && i <= k - 2)
          s -= pairing(lp_block(f, i), hg);
      }
    }
  }
  return s;
}

}  // namespace

TEST_CASE("Bony decomposition against the pointwise product") {
  for (int dim : {2, 3}) {
    auto s = TorusSpec::make(dim, dim == 2 ? 24 : 6);
    for (int seed = 0; seed < 5; ++seed) {
      Field f = rough_field(s, -0.5, 10 + seed), g = rough_field(s, 0.3, 100 + seed);
      ProductTriple t = paraproduct(f, g);
      Field fg = product(f, g);
      CHECK((fg - t.sum()).norm() <= 1e-10 * fg.norm());
      CHECK((t.hi_lo - para_lo(g, f)).norm() == 0.0);
    }
  }
}

TEST_CASE("paraproduct and resonant product against block-by-block oracles") {
  auto s = TorusSpec::make(2, 12);
  Field f = rough_field(s, -0.2, 1), g = rough_field(s, 0.1, 2);
  Field a = para_lo(f, g), b = para_lo_direct(f, g);
  CHECK((a - b).norm() <= 1e-12 * b.norm());
  Field r = resonant(f, g), q = resonant_direct(f, g);
  CHECK((r - q).norm() <= 1e-12 * q.norm());
  Field e = para_hi_eq(f, g);
  CHECK((e - para_hi(f, g) - r).norm() <= 1e-12 * e.norm());
}

TEST_CASE("constant arguments") {
  auto s = TorusSpec::make(2, 16);
  Field g = rough_field(s, 0.0, 3);
  Field one = Field::constant(s, 1.0);
  Field lhs = para_lo(one, g);
  Field rhs = g - lp_block(g, -1) - lp_block(g, 0);
  CHECK((lhs - rhs).norm() <= 1e-12 * g.norm());
  CHECK(para_lo(g, one).norm() <= 1e-14 * g.norm());
}

TEST_CASE("bilinearity") {
  auto s = TorusSpec::make(2, 10);
  Field f1 = rough_field(s, 0, 4), f2 = rough_field(s, 0, 5), g = rough_field(s, 0, 6);
  cplx a(0.3, -1.2), b(2.0, 0.5);
  ProductTriple l = paraproduct(a * f1 + b * f2, g);
  ProductTriple p1 = paraproduct(f1, g), p2 = paraproduct(f2, g);
  CHECK((l.lo_hi - a * p1.lo_hi - b * p2.lo_hi).max_abs() <= 1e-12);
  CHECK((l.resonant - a * p1.resonant - b * p2.resonant).max_abs() <= 1e-12);
  CHECK((l.hi_lo - a * p1.hi_lo - b * p2.hi_lo).max_abs() <= 1e-12);
}

TEST_CASE("commutators") {
  auto s = TorusSpec::make(2, 16);
  Field f = rough_field(s, 0.9, 7), g = rough_field(s, -0.4, 8), h = rough_field(s, -0.4, 9);
  Field zero(s);
  CHECK(commutator_C(f, zero, h).norm() == 0.0);
  CHECK(commutator_CN(f, zero, h, 2).norm() == 0.0);
  // empty high band
  Field cn = commutator_CN(f, g, h, 6);
  CHECK((cn + product(f, resonant(g, h))).norm() <= 1e-12 * cn.norm());
  // difference identity
  Field diff = commutator_C(f, g, h) - commutator_CN(f, g, h, 0);
  Field want = resonant(freq_cutoff(para_lo(f, g), 0, Side::below), h);
  CHECK((diff - want).norm() <= 1e-12 * (want.norm() + 1e-300));
  // constant f
  Field c = Field::constant(s, 2.0);
  Field cc = commutator_C(c, g, h);
  Field direct = resonant(para_lo(c, g), h) - 2.0 * resonant(g, h);
  CHECK((cc - direct).norm() <= 1e-12 * direct.norm());
}

TEST_CASE("adjoint defect D") {
  auto s = TorusSpec::make(2, 12);
  Field f = rough_field(s, 0.5, 1), g = rough_field(s, -0.3, 2), h = rough_field(s, 0.2, 3);
  CHECK(std::abs(adjoint_defect_D(f, g, Field(s))) == 0.0);
  // single modes whose frequencies do not close
  Field a = Field::mode(s, {1, 2, 0}), b = Field::mode(s, {3, -1, 0}), c = Field::mode(s, {0, 5, 0});
  CHECK(std::abs(adjoint_defect_D(a, b, c)) <= 1e-14);
  cplx d = adjoint_defect_D(f, g, h);
  cplx o = defect_block_sum(f, g, h, 4);
  CHECK(std::abs(d - o) <= 1e-10 * std::abs(o));
}

TEST_CASE("resolvent commutator R") {
  auto s = TorusSpec::make(2, 16);
  Field f = rough_field(s, 0.5, 1), g = rough_field(s, -0.3, 2);
  CHECK(para_resolvent_R(f, Field(s)).norm() == 0.0);
  Field c = Field::constant(s, 1.5);
  Field r = para_resolvent_R(c, g);
  Field direct = bessel_inv(para_lo(c, g)) - para_lo(c, bessel_inv(g));
  CHECK((r - direct).norm() <= 1e-14 * (g.norm()));
  // R gains two derivatives relative to the paraproduct
  double ratio = sobolev_norm(para_resolvent_R(f, g), 0.5 - 0.3 + 2 - 0.2) /
                 (sobolev_norm(f, 0.5 - 0.1) * holder_norm(g, -0.3 - 1.0));
  CHECK(std::isfinite(ratio));
}

TEST_CASE("paralinearization") {
  auto s = TorusSpec::make(2, 16);
  Field f = rough_field(s, 0.4, 5, 0.2);
  auto id = paralinearize([](double x) { return x; }, [](double) { return 1.0; }, f);
  Field want = lp_block(f, -1) + lp_block(f, 0);
  CHECK((id.remainder - want).norm() <= 1e-12 * f.norm());
  auto cst = paralinearize([](double) { return 3.0; }, [](double) { return 0.0; }, f);
  CHECK(cst.para_part.norm() == 0.0);
  CHECK((cst.remainder - Field::constant(s, 3.0)).norm() <= 1e-14);
  Field rough = rough_field(s, 0.4, 6);
  rough.reality = false;
  rough[1] += cplx(0, 1);
  CHECK_THROWS(paralinearize([](double x) { return x; }, [](double) { return 1.0; }, rough));
}

TEST_CASE("random field generators are real and band-limited") {
  auto s = TorusSpec::make(3, 6);
  Field f = rough_field(s, 0.3, 42);
  CHECK(f.reality_defect() == 0.0);
  Field g = smooth_field(s, 2, 42);
  CHECK(g.at({3, 0, 0}) == cplx(0, 0));
  CHECK(g.at({2, -2, 1}) != cplx(0, 0));
  CHECK((rough_field(s, 0.3, 42) - f).norm() == 0.0);
}

#include "atorus/paraop.hpp"

TEST_CASE("ParaOperator: action matches primitives and adjoint is exact") {
  for (int dim : {2, 3}) {
    auto s = TorusSpec::make(dim, dim == 2 ? 12 : 5);
    Field g1 = rough_field(s, -0.5, 1), g2 = rough_field(s, 0.5, 2);
    ParaOperator op(s);
    int a = op.add_field(g1), b = op.add_field(g2);
    Multiplier d0 = mult_deriv(s, 0), Li = mult_bessel_inv(s), lap = mult_laplacian(s);
    op.add(ParaOperator::Kind::lo, lap, a, Li, 1.0);
    op.add(ParaOperator::Kind::lo, d0, b, Li, cplx(2.0, 0.0));
    op.add(ParaOperator::Kind::hi, mult_identity(), a, Li, -1.0);
    op.add(ParaOperator::Kind::lo, mult_identity(), b, mult_identity(), cplx(0.5, 0.25));
    op.set_outer(mult_cut(s, 1, Side::above));
    Field f = rough_field(s, 0.3, 3);
    f *= cplx(1.0, -0.7);
    Field want = bessel_inv(para_lo(laplacian(f), g1)) + 2.0 * bessel_inv(para_lo(deriv(f, 0), g2)) -
                 bessel_inv(para_lo(g1, f)) + cplx(0.5, 0.25) * para_lo(f, g2);
    want = freq_cutoff(want, 1, Side::above);
    Field got = op.apply(f);
    CHECK((got - want).norm() <= 1e-12 * want.norm());
    Field h = rough_field(s, -0.2, 4);
    h *= cplx(0.3, 1.0);
    cplx lhs = h.inner(op.apply(f));
    cplx rhs = op.adjoint(h).inner(f);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
  }
}
