#include <cmath>

#include "doctest.h"
#include "atorus/anderson3d.hpp"

using namespace atorus;

namespace {

std::shared_ptr<const EnhancedNoise3D> zero_noise(const TorusSpec& s) {
  return std::make_shared<const EnhancedNoise3D>(enhance_3d(Field(s), 0, 0.5, zero_mollifier()));
}

}  // namespace

TEST_CASE("3-d zero noise: B = 0, Gamma is the identity, A is the Laplacian") {
  auto s = TorusSpec::make(3, 4);
  auto n = zero_noise(s);
  CHECK(n->c1 == 0.0);
  Field us = consistent_field(s, 1.0, 5);
  CHECK(b_xi_3d(us, *n).norm() == 0.0);
  CHECK(b_xi_3d(Field(s), *n).norm() == 0.0);
  auto t = gamma_map_3d(us, *n, 0);
  CHECK((t.u_flat - us).norm() == 0.0);
  CHECK((t.u - us).norm() <= 1e-14 * us.norm());
  CHECK(t.iterations == 1);
  Field a = apply_A_3d(t, *n);
  CHECK((a - laplacian(us)).norm() <= 1e-12 * laplacian(us).norm());
  auto z = gamma_map_3d(Field(s), *n, 0);
  CHECK(z.u.norm() == 0.0);
  auto zr = z_product_check(*n);
  CHECK(zr.direct.norm() == 0.0);
  CHECK(zr.para.norm() == 0.0);
}

TEST_CASE("3-d flat operator: paracontrolled and direct routes agree") {
  auto s = TorusSpec::make(3, 6);
  auto n = std::make_shared<const EnhancedNoise3D>(enhance_3d(13, 0.125, bump_mollifier(), s));
  for (int N : {0, 1, 2}) {
    Paracontrolled3D pc(n, N);
    auto t = pc.gamma(consistent_field(s, 1.5, 60 + N));
    CHECK(t.residual < 1e-9);
    Field a = pc.flat_operator(t), b = pc.flat_operator_direct(t.u_flat);
    CHECK((a - b).norm() <= 1e-12 * b.norm());
    CHECK((pc.gamma_inverse(t.u_flat) - t.u_sharp).norm() == 0.0);
  }
}

TEST_CASE("3-d lift: A agrees with Delta + xi - c1 - c2 for smooth noise") {
  auto s = TorusSpec::make(3, 6);
  auto n = std::make_shared<const EnhancedNoise3D>(enhance_3d(17, 0.5, bump_mollifier(), s));
  Paracontrolled3D pc(n, 0);
  auto t = pc.gamma(smooth_field(s, 1, 4));
  Field a = pc.apply_A(t), b = pc.apply_A_eps(t.u);
  CHECK((a - b).norm() <= 1e-10 * b.norm());
  // u_flat recovered from u by the inverse lift
  CHECK((pc.lift_down(t.u) - t.u_flat).norm() <= 1e-10 * t.u_flat.norm());
}

TEST_CASE("3-d T adjoint and Gamma round trip") {
  auto s = TorusSpec::make(3, 5);
  auto n = std::make_shared<const EnhancedNoise3D>(enhance_3d(8, 0.2, bump_mollifier(), s));
  Paracontrolled3D pc(n, 1);
  Field a = consistent_field(s, 0.0, 1), b = consistent_field(s, 0.0, 2);
  cplx l = pc.T(a).inner(b), r = a.inner(pc.T_adjoint(b));
  CHECK(std::abs(l - r) <= 1e-13 * std::abs(l));
  Field v = consistent_field(s, 1.0, 3);
  auto t = pc.gamma(pc.gamma_inverse(v));
  CHECK((t.u_flat - v).norm() <= 1e-9 * v.norm());
  double ach = 1;
  int N = choose_N_3d(*n, 0.5, &ach);
  CHECK(N >= 0);
  CHECK(ach <= 0.5);
}

TEST_CASE("3-d bundle: Hermitian, shifted, routes agree") {
  auto s = TorusSpec::make(3, 6);
  auto n = enhance_3d(23, 0.25, bump_mollifier(), s);
  BundleOptions o;
  o.N_override = 0;
  auto b = shift_and_bundle_3d(n, o);
  OperatorMatrix& M = b.ham.matrix();
  CHECK(M.asymmetry() <= 1e-12 * M.scale());
  CHECK(b.ham.c() == doctest::Approx(n.c1 + n.c2));
  Field f = consistent_field(s, 0.0, 9);
  Field u = resolvent_apply_3d(b, f, Hamiltonian::Route::matrix);
  Field w = resolvent_apply_3d(b, f, Hamiltonian::Route::iterative);
  CHECK((u - w).norm() <= 1e-9 * u.norm());
  CHECK(b.exp_m2W_sup >= 1.0);
}

TEST_CASE("3-d zero noise: H^1 bound is an identity, Agmon closed form") {
  auto s = TorusSpec::make(3, 4);
  auto n = zero_noise(s);
  BundleOptions o;
  o.margin = 2.0;
  auto b = shift_and_bundle_3d(*n, o);
  CHECK(b.K_Xi() == doctest::Approx(2.0));
  std::vector<FlatSharpTriple> cal{b.pc->gamma(consistent_field(s, 1.0, 1))};
  double sup = calibrate_C_Xi_3d(b, cal);
  CHECK(std::abs(sup) <= 1e-10);
  CHECK(h1_flat_bound_check(b, cal[0]) >= -1e-9);
  // u = 2 cos(2 pi x1): ratio sqrt2 d^{-3/4} with d = K_Xi + 4 pi^2
  Field u = Field::mode(s, {1, 0, 0}) + Field::mode(s, {-1, 0, 0});
  u.reality = true;
  double d = b.K_Xi() + kFourPi2;
  CHECK(agmon_ratio(b.ham, u) == doctest::Approx(std::sqrt(2.0) * std::pow(d, -0.75)).epsilon(1e-10));
  CHECK(agmon_ratio(b.ham, Field(s)) == 0.0);
}

TEST_CASE("3-d calibration holdout and e^{2W} LZ routes") {
  auto s = TorusSpec::make(3, 5);
  auto n = enhance_3d(29, 0.25, bump_mollifier(), s);
  BundleOptions o;
  o.N_override = 0;
  auto b = shift_and_bundle_3d(n, o);
  std::vector<FlatSharpTriple> cal, hold;
  for (int i = 0; i < 10; ++i) {
    cal.push_back(b.pc->gamma(consistent_field(s, 1.0, 100 + i)));
    hold.push_back(b.pc->gamma(consistent_field(s, 1.0, 200 + i)));
  }
  calibrate_C_Xi_3d(b, cal);
  for (const auto& t : hold) CHECK(h1_flat_bound_check(b, t) >= 0.0);
  auto z = z_product_check(n);
  CHECK(z.rel_diff <= 1e-12);
  CHECK(z.norm_para == doctest::Approx(z.norm_direct).epsilon(1e-10));
}
