#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "atorus/spectral.hpp"

using namespace atorus;

namespace {

Field random_field(const TorusSpec& s, unsigned seed, bool real = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Field f(s);
  for (auto& c : f.coeffs()) c = cplx(nd(rng), nd(rng));
  if (real) f.enforce_reality();
  return f;
}

// direct O(N^2) synthesis at one point
cplx eval_direct(const Field& f, const std::array<double, 3>& x) {
  const Lattice& lat = lattice(f.spec());
  cplx s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double ph = 0;
    for (int a = 0; a < f.spec().dim; ++a) ph += lat.k[i][a] * x[a];
    s += f[i] * std::exp(cplx(0, kTwoPi * ph));
  }
  return s;
}

// naive convolution truncated to the lattice
Field convolve_direct(const Field& f, const Field& g) {
  const TorusSpec& s = f.spec();
  const Lattice& lat = lattice(s);
  Field out(s);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      KVec k{lat.k[i][0] + lat.k[j][0], lat.k[i][1] + lat.k[j][1], lat.k[i][2] + lat.k[j][2]};
      if (s.contains(k)) out[s.index(k)] += f[i] * g[j];
    }
  return out;
}

}  // namespace

TEST_CASE("dealias grid is even, 7-smooth and at least 3K+1") {
  CHECK(dealias_grid(8) == 28);
  CHECK(dealias_grid(32) == 98);
  CHECK(dealias_grid(64) == 196);
  for (int K = 4; K < 100; ++K) {
    int n = dealias_grid(K);
    CHECK(n % 2 == 0);
    CHECK(n >= 3 * K + 1);
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(TorusSpec::make(4, 8), SpecError);
  CHECK_THROWS_AS(TorusSpec::make(2, 3), SpecError);
  CHECK_THROWS_AS(TorusSpec::make(2, 8, 15), SpecError);
  CHECK_THROWS_AS(TorusSpec::make(2, 8, 17), SpecError);
  CHECK_NOTHROW(TorusSpec::make(2, 8, 18));
  auto s = TorusSpec::make(3, 5);
  for (std::size_t i = 0; i < s.size(); i += 37) CHECK(s.index(s.k_of(i)) == i);
}

TEST_CASE("transforms: constant, single mode, round trip against direct synthesis") {
  auto s = TorusSpec::make(2, 6);
  Grid ones(s.grid_points(), 1.0);
  Field c = dft_forward(ones, s);
  CHECK(std::abs(c.at({0, 0, 0}) - 1.0) < 1e-14);
  CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-14));

  int n = s.grid_n;
  Grid m(s.grid_points());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m[a * n + b] = std::exp(cplx(0, kTwoPi * a / n));
  Field fm = dft_forward(m, s);
  CHECK(std::abs(fm.at({1, 0, 0}) - 1.0) < 1e-13);
  CHECK(fm.norm() == doctest::Approx(1.0));

  for (int dim : {2, 3}) {
    auto t = TorusSpec::make(dim, 5);
    Field f = random_field(t, 7 + dim, false);
    Grid g = dft_inverse(f);
    // grid values versus direct synthesis at a few points
    int nn = t.grid_n;
    for (std::size_t p : {std::size_t(0), std::size_t(13), g.size() - 1}) {
      std::array<double, 3> x{0, 0, 0};
      std::size_t q = p;
      for (int a = dim - 1; a >= 0; --a) {
        x[a] = double(q % nn) / nn;
        q /= nn;
      }
      CHECK(std::abs(g[p] - eval_direct(f, x)) < 1e-10 * f.norm());
    }
    Field back = dft_forward(g, t);
    CHECK((back - f).norm() < 1e-12 * f.norm());
    // Parseval from grid
    double s2 = 0;
    for (auto& v : g) s2 += std::norm(v);
    s2 /= double(g.size());
    CHECK(std::sqrt(s2) == doctest::Approx(f.norm()).epsilon(1e-10));
  }
}

TEST_CASE("products are exact convolutions on the dealiased grid") {
  for (int dim : {2, 3}) {
    auto s = TorusSpec::make(dim, 4);
    Field f = random_field(s, 1), g = random_field(s, 2);
    Field p = product(f, g);
    Field q = convolve_direct(f, g);
    CHECK((p - q).norm() < 1e-12 * q.norm());
  }
}

TEST_CASE("partition of unity and support conditions") {
  const auto& part = default_partition();
  for (int dim : {2, 3}) {
    auto s = TorusSpec::make(dim, dim == 2 ? 64 : 12);
    const auto& tab = part.table(s);
    double worst = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      double sum = 0;
      for (const auto& row : tab) sum += row[i];
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    CHECK(worst <= 1e-12);
  }
  for (double r = 0; r < 600; r += 0.0371) {
    double tot = part.chi(r);
    for (int j = 0; j < 12; ++j) tot += part.rho(std::ldexp(r, -j));
    CHECK(std::abs(tot - 1.0) < 1e-12);
    for (int j = 1; j < 10; ++j) CHECK(part.chi(r) * part.rho(std::ldexp(r, -j)) == 0.0);
    for (int i = 0; i < 10; ++i)
      for (int j = i + 2; j < 12; ++j) CHECK(part.rho(std::ldexp(r, -i)) * part.rho(std::ldexp(r, -j)) == 0.0);
  }
  CHECK(part.theta(0.75) == 1.0);
  CHECK(part.theta(4.0 / 3.0) == 0.0);
  CHECK(part.rho(0.0) == 0.0);
  CHECK(part.j_max(TorusSpec::make(2, 32)) == 5);
  CHECK(part.j_max(TorusSpec::make(3, 8)) == 4);
}

TEST_CASE("lp blocks: sum, constant, single mode, orthogonality") {
  auto s = TorusSpec::make(2, 20);
  Field f = random_field(s, 3);
  const auto& part = default_partition();
  int jm = part.j_max(s);
  Field sum(s);
  for (int j = -1; j <= jm; ++j) sum += lp_block(f, j);
  CHECK((sum - f).max_abs() < 1e-12);
  CHECK(lp_block(f, jm + 3).norm() == 0.0);

  Field c = Field::constant(s, 2.5);
  CHECK((lp_block(c, -1) - c).norm() == 0.0);
  for (int j = 0; j <= jm; ++j) CHECK(lp_block(c, j).norm() == 0.0);

  // |k| = 5: rho(2^-2 5) = rho(1.25) and rho(2^-3 5) = rho(0.625) = 0 -> j = 2 only
  Field m = Field::mode(s, {3, 4, 0});
  double r2 = part.theta(5.0 / 8.0) - part.theta(5.0 / 4.0);
  CHECK(std::abs(lp_block(m, 2).at({3, 4, 0}) - r2) < 1e-15);

  for (int i = -1; i <= jm; ++i)
    for (int j = i + 2; j <= jm; ++j)
      CHECK(std::abs(lp_block(f, i).inner(lp_block(f, j))) <= 1e-12 * f.norm() * f.norm());
}

TEST_CASE("sharp cutoffs") {
  auto s = TorusSpec::make(2, 10);
  Field f = random_field(s, 4);
  Field hi = freq_cutoff(f, 5, Side::above);
  CHECK(hi.norm() == 0.0);
  Field lo0 = freq_cutoff(f, 0, Side::below);
  int nz = 0;
  for (auto& v : lo0.coeffs()) nz += v != 0.0;
  CHECK(nz == 5);  // (0,0), (+-1,0), (0,+-1)
  for (int N = 0; N < 5; ++N) {
    Field a = freq_cutoff(f, N, Side::above), b = freq_cutoff(f, N, Side::below);
    CHECK((a + b - f).max_abs() == 0.0);
  }
}

TEST_CASE("norms") {
  auto s = TorusSpec::make(2, 8);
  CHECK(besov_norm(Field(s), 0.5, 2, 2).value == 0.0);
  CHECK(sobolev_norm(Field::constant(s, 3.0), 1.7) == doctest::Approx(3.0));
  CHECK(sobolev_norm(Field::mode(s, {3, 4, 0}), 1.0) == doctest::Approx(std::sqrt(26.0)));
  Field f = random_field(s, 9);
  CHECK(sobolev_norm(f, 0) == doctest::Approx(f.norm()).epsilon(1e-12));
  CHECK(lp_norm(f, 2) == doctest::Approx(f.norm()).epsilon(1e-10));
  for (double q : {1.0, 2.0, kInf}) {
    auto r = besov_norm(f, -0.7, 3.0, q);
    CHECK(r.recompute() == doctest::Approx(r.value).epsilon(1e-12));
  }
  CHECK_THROWS(besov_norm(f, 0.1, 0.5, 2));
  // L^inf of a cosine
  Field c = Field::mode(s, {1, 0, 0}, 0.5) + Field::mode(s, {-1, 0, 0}, 0.5);
  CHECK(lp_norm(c, kInf) == doctest::Approx(1.0));
}

TEST_CASE("Bernstein ratios") {
  auto s = TorusSpec::make(2, 16);
  // single mode k = (5,0), which block 2 sees: ratio 2 pi |k| / 2^2
  Field m = lp_block(Field::mode(s, {5, 0, 0}), 2);
  double r = bernstein_check(m, 2, 1, 2, 2);
  CHECK(r == doctest::Approx(kTwoPi * 5 / 4.0));
  CHECK(r <= kTwoPi * DyadicPartition::annulus_b);
  CHECK(bernstein_check(Field::constant(s, 1.0), -1, 1, 2, 2) == 0.0);
  CHECK_THROWS(bernstein_check(Field::mode(s, {12, 0, 0}), 1, 1, 2, 2));
}

TEST_CASE("snapshots round trip") {
  auto s = TorusSpec::make(3, 4);
  Field f = random_field(s, 11);
  f.reality = true;
  for (bool bin : {false, true}) {
    std::stringstream ss;
    if (bin)
      write_snapshot_binary(ss, f);
    else
      write_snapshot_text(ss, f);
    Field g = bin ? read_snapshot_binary(ss) : read_snapshot_text(ss);
    CHECK(g.spec() == s);
    CHECK(g.reality);
    CHECK((g - f).max_abs() == 0.0);
  }
}
