#include <cmath>

#include "atorus/anderson2d.hpp"

namespace atorus {

Hamiltonian::Hamiltonian(const Field& V, double c, bool dense) : V_(V), c_(c) {
  if (dense) M_ = std::make_shared<OperatorMatrix>(OperatorMatrix::schrodinger(V, c));
}

OperatorMatrix& Hamiltonian::matrix() const {
  if (!M_) throw std::logic_error("Hamiltonian: no dense matrix (matrix-free mode)");
  return *M_;
}

Field Hamiltonian::apply_A(const Field& u) const {
  require_same_spec(u, V_, "Hamiltonian::apply_A");
  if (M_) return M_->apply(u);
  Field out = laplacian(u) + product(V_, u);
  out.axpy(-c_, u);
  out.reality = u.reality;
  return out;
}

Field Hamiltonian::apply_H(const Field& u) const {
  Field out = apply_A(u);
  out.axpy(-K_Xi, u);
  return out;
}

Field Hamiltonian::apply_minus_H(const Field& u) const {
  Field out = -apply_A(u);
  out.axpy(K_Xi, u);
  out.reality = u.reality;
  return out;
}

void Hamiltonian::ensure_spectrum() const { matrix().compute_spectrum(); }

double Hamiltonian::lambda_max() const {
  if (M_ && M_->has_spectrum()) return M_->lambda_max();
  const RealBasis& rb = real_basis(spec());
  LinOp op;
  if (M_)
    op = [this](const RVec& x) { return M_->apply(x); };
  else
    op = [this, &rb](const RVec& x) { return rb.to_real(apply_A(rb.from_real(x))); };
  EigResult r = lanczos_extreme(op, rb.dim(), true, 400, 1e-11, 1, nullptr, 6);
  if (!r.converged) throw NumericalFailure("Hamiltonian::lambda_max: Lanczos did not converge");
  return r.value;
}

Field Hamiltonian::resolvent(const Field& f, Route via, double tol) const {
  require_same_spec(f, V_, "resolvent");
  if (via == Route::matrix) return matrix().solve_shifted(K_Xi, f);
  const RealBasis& rb = real_basis(spec());
  std::size_t n = rb.dim();
  LinOp op = [this, &rb](const RVec& x) {
    RVec y = M_ ? M_->apply(x) : rb.to_real(apply_A(rb.from_real(x)));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = K_Xi * x[i] - y[i];
    return y;
  };
  RVec diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 1.0 / (K_Xi + kFourPi2 * rb.k2()[i] + c_);
  LinOp pre = [&diag](const RVec& x) {
    RVec y(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= diag[i];
    return y;
  };
  CVec c = rb.to_coords(f);
  RVec re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = c[i].real();
    im[i] = c[i].imag();
  }
  SolveResult a = conjugate_gradient(op, re, tol, 5000, &pre);
  SolveResult b = conjugate_gradient(op, im, tol, 5000, &pre);
  if (!a.converged || !b.converged)
    throw NumericalFailure("resolvent: conjugate gradients did not converge");
  for (std::size_t i = 0; i < n; ++i) c[i] = cplx(a.x[i], b.x[i]);
  Field out = rb.from_coords(c);
  out.reality = f.reality;
  return out;
}

double Hamiltonian::energy_norm(const Field& u) const {
  double q = u.inner(apply_minus_H(u)).real();
  double scale = std::max(1.0, std::abs(K_Xi)) * u.norm() * u.norm();
  if (q < -1e-10 * scale) throw NumericalFailure("energy_norm: negative quadratic form (K_Xi too small)");
  return std::sqrt(std::max(0.0, q));
}

OperatorBundle2D shift_and_bundle(const EnhancedNoise2D& noise, const BundleOptions& opt) {
  if (!(opt.margin > 0)) throw std::invalid_argument("shift_and_bundle: margin must be > 0");
  OperatorBundle2D b;
  b.noise = std::make_shared<const EnhancedNoise2D>(noise);
  b.N = opt.N_override >= 0 ? opt.N_override : choose_N(noise, opt.target, opt.form);
  b.pc = std::make_shared<const Paracontrolled2D>(b.noise, b.N, opt.form);
  bool dense = opt.dense && noise.xi.spec().size() <= kMaxDenseRows;
  b.ham = Hamiltonian(noise.xi, noise.c_eps, dense);
  b.margin = opt.margin;
  b.lambda_max = b.ham.lambda_max();
  b.ham.K_Xi = opt.K_Xi_override ? *opt.K_Xi_override : b.lambda_max + opt.margin;
  return b;
}

Field resolvent_apply(const OperatorBundle2D& b, const Field& f, Hamiltonian::Route via) {
  return b.ham.resolvent(f, via);
}

double energy_norm(const OperatorBundle2D& b, const Field& u) { return b.ham.energy_norm(u); }

int count_inversions(const std::vector<double>& seq) {
  int c = 0;
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i] > seq[i - 1]) ++c;
  return c;
}

LadderTable resolvent_ladder(const std::vector<Field>& V, const std::vector<double>& c,
                             const std::vector<double>& eps, const std::vector<Field>& fs, double s,
                             double margin) {
  if (V.size() < 2 || c.size() != V.size()) throw std::invalid_argument("resolvent_ladder: need at least two rungs");
  LadderTable t;
  t.eps = eps;
  double K = -kInf;
  for (std::size_t i = 0; i < V.size(); ++i) {
    bool dense = V[i].spec().size() <= kMaxDenseRows;
    K = std::max(K, Hamiltonian(V[i], c[i], dense).lambda_max() + margin);
  }
  t.K_Xi = K;
  std::vector<std::vector<Field>> sol(fs.size());
  for (std::size_t i = 0; i < V.size(); ++i) {
    // one factorization alive at a time
    Hamiltonian h(V[i], c[i], V[i].spec().size() <= kMaxDenseRows);
    h.K_Xi = K;
    auto route = h.dense() ? Hamiltonian::Route::matrix : Hamiltonian::Route::iterative;
    for (std::size_t j = 0; j < fs.size(); ++j) sol[j].push_back(h.resolvent(fs[j], route));
  }
  t.opnorm.assign(V.size() - 1, 0.0);
  for (std::size_t j = 0; j < fs.size(); ++j) {
    std::vector<double> row;
    for (std::size_t i = 0; i + 1 < V.size(); ++i) {
      row.push_back(sobolev_norm(sol[j][i] - sol[j][i + 1], s));
      t.opnorm[i] = std::max(t.opnorm[i], row.back() / std::max(fs[j].norm(), 1e-300));
    }
    t.inversions.push_back(count_inversions(row));
    t.diff.push_back(std::move(row));
  }
  return t;
}

LadderTable resolvent_ladder(const std::vector<std::shared_ptr<const EnhancedNoise2D>>& rungs,
                             const std::vector<Field>& fs, double gamma, double margin) {
  std::vector<Field> V;
  std::vector<double> c, eps;
  for (const auto& r : rungs) {
    V.push_back(r->xi);
    c.push_back(r->c_eps);
    eps.push_back(r->eps);
  }
  return resolvent_ladder(V, c, eps, fs, gamma, margin);
}

}  // namespace atorus
