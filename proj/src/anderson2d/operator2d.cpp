#include <cmath>
#include <random>

#include "atorus/anderson2d.hpp"

namespace atorus {

namespace {

std::shared_ptr<const EnhancedNoise2D> share(const EnhancedNoise2D& n) {
  return std::make_shared<const EnhancedNoise2D>(n);
}

// B terms into op, post-composed with `post` after (1-Delta)^{-1}
void add_B_terms(ParaOperator& op, const TorusSpec& s, const EnhancedNoise2D& n, const Field& Xi2) {
  Multiplier Linv = mult_bessel_inv(s);
  int gX = op.add_field(n.X);
  int gxi = op.add_field(n.xi);
  int gXi2 = op.add_field(Xi2);
  op.add(ParaOperator::Kind::lo, mult_laplacian(s), gX, Linv, 1.0);
  for (int a = 0; a < s.dim; ++a) {
    int gd = op.add_field(deriv(n.X, a));
    op.add(ParaOperator::Kind::lo, mult_deriv(s, a), gd, Linv, 2.0);
  }
  op.add(ParaOperator::Kind::hi, mult_identity(), gxi, Linv, 1.0);
  op.add(ParaOperator::Kind::lo, mult_identity(), gXi2, Linv, -1.0);
}

Field xi2_for(const EnhancedNoise2D& n, Formulation form) {
  Field x = n.Xi2;
  if (form == Formulation::as_printed) x[lattice(x.spec()).zero] += 2.0 * n.c_eps;
  return x;
}

}  // namespace

Paracontrolled2D::Paracontrolled2D(std::shared_ptr<const EnhancedNoise2D> noise, int N, Formulation form)
    : noise_(std::move(noise)), N_(N), form_(form) {
  const TorusSpec& s = noise_->xi.spec();
  if (s.dim != 2) throw SpecError("Paracontrolled2D: needs a 2-d spec");
  if (N < 0) throw std::invalid_argument("Paracontrolled2D: N must be >= 0");
  Xi2_ = xi2_for(*noise_, form);
  Bop_ = std::make_unique<ParaOperator>(s);
  add_B_terms(*Bop_, s, *noise_, Xi2_);
  Top_ = std::make_unique<ParaOperator>(s);
  add_B_terms(*Top_, s, *noise_, Xi2_);
  int gX = Top_->add_field(noise_->X);
  Top_->add(ParaOperator::Kind::lo, mult_identity(), gX, mult_identity(), 1.0);
  Top_->set_outer(mult_cut(s, N, Side::above));
}

Field Paracontrolled2D::B(const Field& u) const { return Bop_->apply(u); }
Field Paracontrolled2D::T(const Field& u) const { return Top_->apply(u); }
Field Paracontrolled2D::T_adjoint(const Field& h) const { return Top_->adjoint(h); }

double Paracontrolled2D::contraction(int max_iter, double tol) const {
  const TorusSpec& s = noise_->xi.spec();
  const RealBasis& rb = real_basis(s);
  // T maps real fields to real fields: its norm on L^2 equals the norm of the real matrix
  LinOp f = [&](const RVec& x) { return rb.to_real(T(rb.from_real(x))); };
  LinOp fa = [&](const RVec& x) { return rb.to_real(T_adjoint(rb.from_real(x))); };
  return operator_norm_power(f, fa, rb.dim(), max_iter, tol, 0x5eedULL + noise_->seed).value;
}

ParacontrolledPair Paracontrolled2D::gamma(const Field& u_sharp, double tol, int max_iter) const {
  require_same_spec(u_sharp, noise_->xi, "gamma_map");
  ParacontrolledPair p;
  p.N = N_;
  double ref = u_sharp.norm();
  Field g = u_sharp;
  bool ok = false;
  for (int it = 1; it <= max_iter; ++it) {
    Field next = T(g) + u_sharp;
    double r = (next - g).norm();
    g = std::move(next);
    p.iterations = it;
    if (r <= tol * ref) {
      ok = true;
      break;
    }
  }
  if (!ok) throw NumericalFailure("gamma_map: no convergence in " + std::to_string(max_iter) + " iterations");
  g.reality = u_sharp.reality;
  p.u = g;
  p.u_sharp = gamma_inverse(g);
  p.residual = ref > 0 ? (p.u_sharp - u_sharp).norm() / ref : p.u_sharp.norm();
  return p;
}

Field Paracontrolled2D::gamma_inverse(const Field& u) const {
  Field r = u - T(u);
  r.reality = u.reality;
  return r;
}

Field Paracontrolled2D::G(const Field& u) const {
  const EnhancedNoise2D& n = *noise_;
  Field Bu = B(u);
  ProductTriple ux = paraproduct(u, n.xi);
  Field CN = commutator_CN(u, n.X, n.xi, N_);
  if (form_ == Formulation::consistent) {
    Field low = freq_cutoff(ux.lo_hi + ux.hi_lo, N_, Side::below);
    Field high = freq_cutoff(para_lo(u, n.X) + Bu + para_lo(u, Xi2_), N_, Side::above);
    return low + high + CN + product(u, Xi2_) + resonant(freq_cutoff(Bu, N_, Side::above), n.xi);
  }
  Field low = freq_cutoff(ux.lo_hi + ux.hi_lo + para_lo(u, Xi2_), N_, Side::below);
  Field high = freq_cutoff(-Bu - para_lo(u, n.X) + para_hi_eq(u, Xi2_) + CN + resonant(Bu, n.xi), N_,
                           Side::above);
  return low + high;
}

Field Paracontrolled2D::apply_A(const ParacontrolledPair& p) const {
  require_same_spec(p.u, noise_->xi, "apply_A");
  Field out = laplacian(p.u_sharp) + resonant(p.u_sharp, noise_->xi) + G(p.u);
  out.reality = p.u.reality;
  return out;
}

Field Paracontrolled2D::apply_A_eps(const Field& u) const {
  Field out = laplacian(u) + product(noise_->xi, u);
  out.axpy(-noise_->c_eps, u);
  out.reality = u.reality;
  return out;
}

Field b_xi(const Field& u, const EnhancedNoise2D& noise, Formulation form) {
  require_same_spec(u, noise.xi, "b_xi");
  Paracontrolled2D pc(share(noise), 0, form);
  return pc.B(u);
}

int choose_N(const EnhancedNoise2D& noise, double target, Formulation form, double* achieved) {
  if (!(target > 0 && target < 1)) throw std::invalid_argument("choose_N: target must lie in (0,1)");
  const TorusSpec& s = noise.xi.spec();
  auto sh = share(noise);
  double lim = s.K * std::sqrt(double(s.dim));
  for (int N = 0; std::ldexp(1.0, N) <= lim; ++N) {
    Paracontrolled2D pc(sh, N, form);
    double c = pc.contraction();
    if (c <= target) {
      if (achieved) *achieved = c;
      return N;
    }
  }
  throw NumericalFailure("resolution too small for this realization");
}

ParacontrolledPair gamma_map(const Field& u_sharp, const EnhancedNoise2D& noise, int N) {
  return Paracontrolled2D(share(noise), N).gamma(u_sharp);
}

Field gamma_inverse(const Field& u, const EnhancedNoise2D& noise, int N) {
  return Paracontrolled2D(share(noise), N).gamma_inverse(u);
}

Field apply_A(const ParacontrolledPair& pair, const EnhancedNoise2D& noise, Formulation form) {
  return Paracontrolled2D(share(noise), pair.N, form).apply_A(pair);
}

OperatorMatrix assemble_matrix_eps(const EnhancedNoise2D& noise) {
  return OperatorMatrix::schrodinger(noise.xi, noise.c_eps);
}

Field consistent_field(const TorusSpec& spec, double s, std::uint64_t seed, double sigma) {
  Field f = sample_white_noise(seed, spec);
  if (spec.dim == 3) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x3d);
    std::normal_distribution<double> nd;
    f[lattice(spec).zero] = nd(rng);
  }
  const Lattice& lat = lattice(spec);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] *= sigma / std::pow(1.0 + std::sqrt(lat.k2[i]), s + 0.5 * spec.dim);
  f.reality = true;
  f.zero_mode_excluded = false;
  return f;
}

}  // namespace atorus
