#include <cmath>
#include <random>

#include "doctest.h"
#include "atorus/linalg.hpp"
#include "atorus/paracalc.hpp"

using namespace atorus;

namespace {

Field schrodinger_direct(const Field& V, double shift, const Field& u) {
  return laplacian(u) + product(V, u) - shift * u;
}

}  // namespace

TEST_CASE("real basis is orthonormal and complete") {
  auto s = TorusSpec::make(2, 5);
  const RealBasis& B = real_basis(s);
  CHECK(B.dim() == s.size());
  Field f = rough_field(s, 0, 3);
  RVec c = B.to_real(f);
  CHECK((B.from_real(c) - f).max_abs() < 1e-14);
  CHECK(norm2(c) == doctest::Approx(f.norm()));
  Field g = rough_field(s, 0, 4);
  g *= cplx(0.3, 1.1);
  g += f;
  CVec z = B.to_coords(g);
  CHECK((B.from_coords(z) - g).max_abs() < 1e-14);
}

TEST_CASE("Schrodinger matrix: Hermitian, diagonal case, action matches convolution") {
  for (int dim : {2, 3}) {
    auto s = TorusSpec::make(dim, dim == 2 ? 6 : 4);
    Field V = rough_field(s, -1.0, 7);
    auto M = OperatorMatrix::schrodinger(V, 2.5);
    CHECK(M.asymmetry() <= 1e-12 * M.scale());
    Field u = rough_field(s, 1.0, 8);
    u *= cplx(1.0, 0.4);
    Field a = M.apply(u), b = schrodinger_direct(V, 2.5, u);
    CHECK((a - b).max_abs() <= 1e-11 * b.max_abs());
  }
  auto s = TorusSpec::make(2, 5);
  auto D = OperatorMatrix::schrodinger(Field(s), 1.0);
  const RealBasis& B = real_basis(s);
  for (std::size_t i = 0; i < B.dim(); ++i) {
    CHECK(D(i, i) == doctest::Approx(-kFourPi2 * B.k2()[i] - 1.0));
    for (std::size_t j = 0; j < B.dim(); ++j)
      if (j != i) CHECK(D(i, j) == 0.0);
  }
}

TEST_CASE("dense row guard") {
  auto s = TorusSpec::make(3, 12);
  CHECK_THROWS_AS(OperatorMatrix::schrodinger(Field(s), 0.0), ResourceError);
}

TEST_CASE("spectrum, functional calculus and shifted solves") {
  auto s = TorusSpec::make(2, 6);
  Field V = rough_field(s, -1.0, 9, 5.0);
  auto M = OperatorMatrix::schrodinger(V, 0.0);
  M.compute_spectrum();
  const RVec& lam = M.eigenvalues();
  for (std::size_t i = 1; i < lam.size(); ++i) CHECK(lam[i] >= lam[i - 1]);
  Field u = rough_field(s, 1.0, 10);
  Field viaphi = M.apply_function([](double l) { return cplx(l, 0); }, u);
  CHECK((viaphi - M.apply(u)).max_abs() <= 1e-10 * viaphi.max_abs());
  Field unit = M.apply_function([](double l) { return std::exp(cplx(0, -0.3 * l)); }, u);
  CHECK(unit.norm() == doctest::Approx(u.norm()).epsilon(1e-12));

  double shift = M.lambda_max() + 1.0;
  Field x = M.solve_shifted(shift, u);
  Field back = shift * x - M.apply(x);
  CHECK((back - u).norm() <= 1e-10 * u.norm());
  CHECK_THROWS_AS(M.solve_shifted(M.lambda_min(), u), NumericalFailure);

  // Krylov routes
  LinOp A = [&](const RVec& v) { return M.apply(v); };
  auto top = lanczos_extreme(A, M.n(), true, 300, 1e-11);
  CHECK(top.converged);
  CHECK(top.value == doctest::Approx(M.lambda_max()).epsilon(1e-9));
  // short cycles with restarts reach the same value
  auto rs = lanczos_extreme(A, M.n(), true, 15, 1e-11, 3, nullptr, 40);
  CHECK(rs.converged);
  CHECK(rs.value == doctest::Approx(M.lambda_max()).epsilon(1e-9));
  auto bot = lanczos_extreme(A, M.n(), false, 300, 1e-11);
  CHECK(bot.value == doctest::Approx(M.lambda_min()).epsilon(1e-9));

  LinOp S = [&](const RVec& v) {
    RVec w = M.apply(v);
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = shift * v[i] - w[i];
    return w;
  };
  const RealBasis& B = real_basis(s);
  RVec b = B.to_real(u);
  auto cg = conjugate_gradient(S, b, 1e-13, 5000);
  CHECK(cg.converged);
  CHECK((B.from_real(cg.x) - x).norm() <= 1e-10 * x.norm());

  auto pn = operator_norm_power(A, A, M.n(), 2000, 1e-12);
  CHECK(pn.value == doctest::Approx(std::max(std::abs(M.lambda_min()), std::abs(M.lambda_max()))).epsilon(1e-4));
}
