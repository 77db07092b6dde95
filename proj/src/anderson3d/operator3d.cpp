#include <cmath>

#include "atorus/anderson3d.hpp"

namespace atorus {

namespace {

using Kind = ParaOperator::Kind;

std::shared_ptr<const EnhancedNoise3D> share(const EnhancedNoise3D& n) {
  return std::make_shared<const EnhancedNoise3D>(n);
}

// R1 = Dv<Z + 2 grad v<grad Z + v<Z + 2 grad Dv<Wt + 4 grad^2 v<grad Wt + 2 grad v<Wt
void add_R1(ParaOperator& op, const TorusSpec& s, const EnhancedNoise3D& n, const Multiplier& post) {
  Multiplier id = mult_identity(), lap = mult_laplacian(s);
  int gZ = op.add_field(n.Z);
  op.add(Kind::lo, lap, gZ, post, 1.0);
  op.add(Kind::lo, id, gZ, post, 1.0);
  for (int i = 0; i < 3; ++i) {
    Multiplier di = mult_deriv(s, i);
    op.add(Kind::lo, di, op.add_field(deriv(n.Z, i)), post, 2.0);
    int gW = op.add_field(n.Wt[i]);
    op.add(Kind::lo, compose(di, lap), gW, post, 2.0);
    op.add(Kind::lo, di, gW, post, 2.0);
    for (int k = 0; k < 3; ++k)
      op.add(Kind::lo, compose(di, mult_deriv(s, k)), op.add_field(deriv(n.Wt[i], k)), post, 4.0);
  }
}

// S = 2 L Wt < grad v + L Z < v + (< and > parts of) v Q0 + sum_j d_j v Q_j
void add_S(ParaOperator& op, const TorusSpec& s, const EnhancedNoise3D& n, const Field& LZ,
           const std::vector<Field>& LWt, const Multiplier& post) {
  Multiplier id = mult_identity();
  op.add(Kind::hi, id, op.add_field(LZ), post, 1.0);
  Field Q0 = resonant(n.Z, LZ);
  for (int i = 0; i < 3; ++i) {
    op.add(Kind::hi, mult_deriv(s, i), op.add_field(LWt[i]), post, 2.0);
    Q0 += 2.0 * resonant(deriv(n.Z, i), LWt[i]);
  }
  int g0 = op.add_field(Q0);
  op.add(Kind::lo, id, g0, post, 1.0);
  op.add(Kind::hi, id, g0, post, 1.0);
  for (int j = 0; j < 3; ++j) {
    Field Qj = 2.0 * resonant(n.Z, LWt[j]) + 2.0 * resonant(n.Wt[j], LZ);
    for (int i = 0; i < 3; ++i) Qj += 4.0 * resonant(deriv(n.Wt[j], i), LWt[i]);
    int gj = op.add_field(Qj);
    op.add(Kind::lo, mult_deriv(s, j), gj, post, 1.0);
    op.add(Kind::hi, mult_deriv(s, j), gj, post, 1.0);
  }
}

// v < Z + 2 grad v < Wt
void add_lead(ParaOperator& op, const TorusSpec& s, const EnhancedNoise3D& n) {
  op.add(Kind::lo, mult_identity(), op.add_field(n.Z), mult_identity(), 1.0);
  for (int i = 0; i < 3; ++i) op.add(Kind::lo, mult_deriv(s, i), op.add_field(n.Wt[i]), mult_identity(), 2.0);
}

}  // namespace

Paracontrolled3D::Paracontrolled3D(std::shared_ptr<const EnhancedNoise3D> noise, int N)
    : noise_(std::move(noise)), N_(N) {
  const TorusSpec& s = noise_->xi.spec();
  if (s.dim != 3) throw SpecError("Paracontrolled3D: needs a 3-d spec");
  if (N < 0) throw std::invalid_argument("Paracontrolled3D: N must be >= 0");
  const EnhancedNoise3D& n = *noise_;
  lift_ = exp_lift(n);
  LZ_ = bessel(n.Z);
  for (const Field& w : n.Wt) LWt_.push_back(bessel(w));
  Multiplier Linv = mult_bessel_inv(s);
  Bop_ = std::make_unique<ParaOperator>(s);
  add_R1(*Bop_, s, n, Linv);
  add_S(*Bop_, s, n, LZ_, LWt_, Linv);
  Top_ = std::make_unique<ParaOperator>(s);
  add_R1(*Top_, s, n, Linv);
  add_S(*Top_, s, n, LZ_, LWt_, Linv);
  add_lead(*Top_, s, n);
  Top_->set_outer(mult_cut(s, N, Side::above));
  Sop_ = std::make_unique<ParaOperator>(s);
  add_S(*Sop_, s, n, LZ_, LWt_, mult_identity());
}

Field Paracontrolled3D::B(const Field& v) const { return Bop_->apply(v); }
Field Paracontrolled3D::T(const Field& v) const { return Top_->apply(v); }
Field Paracontrolled3D::T_adjoint(const Field& h) const { return Top_->adjoint(h); }

double Paracontrolled3D::contraction(int max_iter, double tol) const {
  const RealBasis& rb = real_basis(noise_->xi.spec());
  LinOp f = [&](const RVec& x) { return rb.to_real(T(rb.from_real(x))); };
  LinOp fa = [&](const RVec& x) { return rb.to_real(T_adjoint(rb.from_real(x))); };
  return operator_norm_power(f, fa, rb.dim(), max_iter, tol, 0x3d5eedULL + noise_->seed).value;
}

Field Paracontrolled3D::lift_up(const Field& v) const { return exp_multiply(lift_.expW, v); }
Field Paracontrolled3D::lift_down(const Field& u) const { return exp_multiply(lift_.expmW, u); }

FlatSharpTriple Paracontrolled3D::gamma(const Field& u_sharp, double tol, int max_iter) const {
  require_same_spec(u_sharp, noise_->xi, "gamma_map_3d");
  double ref = u_sharp.norm();
  Field g = u_sharp;
  int iters = 0;
  bool ok = false;
  for (int it = 1; it <= max_iter; ++it) {
    Field next = T(g) + u_sharp;
    double r = (next - g).norm();
    g = std::move(next);
    iters = it;
    if (r <= tol * ref) {
      ok = true;
      break;
    }
  }
  if (!ok) throw NumericalFailure("gamma_map_3d: no convergence in " + std::to_string(max_iter) + " iterations");
  g.reality = u_sharp.reality;
  FlatSharpTriple t = from_flat(g);
  t.iterations = iters;
  t.residual = ref > 0 ? (t.u_sharp - u_sharp).norm() / ref : t.u_sharp.norm();
  return t;
}

Field Paracontrolled3D::gamma_inverse(const Field& v) const {
  Field r = v - T(v);
  r.reality = v.reality;
  return r;
}

FlatSharpTriple Paracontrolled3D::from_flat(const Field& v) const {
  FlatSharpTriple t;
  t.N = N_;
  t.u_flat = v;
  t.u_sharp = gamma_inverse(v);
  t.u = lift_up(v);
  return t;
}

Field Paracontrolled3D::G(const Field& v) const {
  const EnhancedNoise3D& n = *noise_;
  auto gv = gradient(v);
  Field Bv = B(v);
  Field P = para_lo(v, n.Z) + Bv;
  Field low = para_lo(v, LZ_);
  for (int i = 0; i < 3; ++i) {
    P += 2.0 * para_lo(gv[i], n.Wt[i]);
    low += 2.0 * para_lo(gv[i], LWt_[i]);
  }
  Field S = Sop_->apply(v);
  Field Phi = freq_cutoff(P, N_, Side::above);
  Field out = freq_cutoff(Bv - S, N_, Side::above) + freq_cutoff(low, N_, Side::below) + para_hi(v, LZ_) +
              resonant(LZ_, Phi);
  for (int i = 0; i < 3; ++i) out += 2.0 * (para_hi(gv[i], LWt_[i]) + resonant(LWt_[i], deriv(Phi, i)));
  return out;
}

Field Paracontrolled3D::flat_operator(const FlatSharpTriple& t) const {
  const Field& vs = t.u_sharp;
  Field out = laplacian(vs) + resonant(LZ_, vs) + G(t.u_flat);
  for (int i = 0; i < 3; ++i) out += 2.0 * resonant(LWt_[i], deriv(vs, i));
  out.reality = t.u_flat.reality;
  return out;
}

Field Paracontrolled3D::flat_operator_direct(const Field& v) const {
  Field out = laplacian(v) + product(LZ_, v);
  for (int i = 0; i < 3; ++i) out += 2.0 * product(LWt_[i], deriv(v, i));
  out.reality = v.reality;
  return out;
}

Field Paracontrolled3D::apply_A(const FlatSharpTriple& t) const { return lift_up(flat_operator(t)); }

Field Paracontrolled3D::apply_A_eps(const Field& u) const {
  Field out = laplacian(u) + product(noise_->xi, u);
  out.axpy(-(noise_->c1 + noise_->c2), u);
  out.reality = u.reality;
  return out;
}

Field b_xi_3d(const Field& u_flat, const EnhancedNoise3D& noise) {
  require_same_spec(u_flat, noise.xi, "b_xi_3d");
  return Paracontrolled3D(share(noise), 0).B(u_flat);
}

int choose_N_3d(const EnhancedNoise3D& noise, double target, double* achieved) {
  if (!(target > 0 && target < 1)) throw std::invalid_argument("choose_N_3d: target must lie in (0,1)");
  const TorusSpec& s = noise.xi.spec();
  auto sh = share(noise);
  double lim = s.K * std::sqrt(3.0);
  for (int N = 0; std::ldexp(1.0, N) <= lim; ++N) {
    double c = Paracontrolled3D(sh, N).contraction();
    if (c <= target) {
      if (achieved) *achieved = c;
      return N;
    }
  }
  throw NumericalFailure("resolution too small for this realization");
}

FlatSharpTriple gamma_map_3d(const Field& u_sharp, const EnhancedNoise3D& noise, int N) {
  return Paracontrolled3D(share(noise), N).gamma(u_sharp);
}

Field gamma_inverse_3d(const Field& u_flat, const EnhancedNoise3D& noise, int N) {
  return Paracontrolled3D(share(noise), N).gamma_inverse(u_flat);
}

Field apply_A_3d(const FlatSharpTriple& t, const EnhancedNoise3D& noise) {
  return Paracontrolled3D(share(noise), t.N).apply_A(t);
}

OperatorMatrix assemble_matrix_eps_3d(const EnhancedNoise3D& noise) {
  return OperatorMatrix::schrodinger(noise.xi, noise.c1 + noise.c2);
}

}  // namespace atorus
