#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include <cblas.h>
#include <lapacke.h>

#include "atorus/linalg.hpp"

namespace atorus {

namespace {

bool lex_positive(const KVec& k) {
  for (int a = 0; a < 3; ++a) {
    if (k[a] > 0) return true;
    if (k[a] < 0) return false;
  }
  return false;
}

}  // namespace

RealBasis::RealBasis(const TorusSpec& s) : spec_(s) {
  const Lattice& lat = lattice(s);
  const double r = 1.0 / std::sqrt(2.0);
  elems_.push_back({lat.zero, lat.zero, 1.0, 0.0});
  k2_.push_back(0.0);
  for (std::size_t i = 0; i < lat.k.size(); ++i) {
    if (!lex_positive(lat.k[i])) continue;
    std::size_t j = lat.neg[i];
    elems_.push_back({i, j, cplx(r, 0), cplx(r, 0)});
    elems_.push_back({i, j, cplx(0, -r), cplx(0, r)});
    k2_.push_back(lat.k2[i]);
    k2_.push_back(lat.k2[i]);
  }
}

const RealBasis& real_basis(const TorusSpec& s) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<RealBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{s.dim, s.K, s.grid_n}];
  if (!slot) slot = std::make_unique<RealBasis>(s);
  return *slot;
}

CVec RealBasis::to_coords(const Field& f) const {
  if (f.spec() != spec_) throw SpecError("RealBasis::to_coords: spec mismatch");
  CVec c(dim());
  for (std::size_t p = 0; p < dim(); ++p) {
    const Elem& e = elems_[p];
    if (e.ia == e.ib)
      c[p] = f[e.ia];
    else
      c[p] = std::conj(e.wa) * f[e.ia] + std::conj(e.wb) * f[e.ib];
  }
  return c;
}

RVec RealBasis::to_real(const Field& f) const {
  CVec c = to_coords(f);
  RVec r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = c[i].real();
  return r;
}

Field RealBasis::from_coords(const CVec& c) const {
  if (c.size() != dim()) throw SpecError("RealBasis::from_coords: size mismatch");
  Field f(spec_);
  for (std::size_t p = 0; p < dim(); ++p) {
    const Elem& e = elems_[p];
    if (e.ia == e.ib) {
      f[e.ia] += c[p];
    } else {
      f[e.ia] += c[p] * e.wa;
      f[e.ib] += c[p] * e.wb;
    }
  }
  return f;
}

Field RealBasis::from_real(const RVec& c) const {
  CVec z(c.begin(), c.end());
  Field f = from_coords(z);
  f.reality = true;
  return f;
}

OperatorMatrix::OperatorMatrix(const TorusSpec& s, RVec entries) : spec_(s), a_(std::move(entries)) {
  n_ = real_basis(s).dim();
  if (a_.size() != n_ * n_) throw SpecError("OperatorMatrix: entry count does not match the basis");
}

OperatorMatrix OperatorMatrix::schrodinger(const Field& V, double shift) {
  const TorusSpec& s = V.spec();
  const RealBasis& B = real_basis(s);
  std::size_t n = B.dim();
  if (n > kMaxDenseRows)
    throw ResourceError("dense operator matrix with " + std::to_string(n) + " rows exceeds the " +
                        std::to_string(kMaxDenseRows) + "-row guard; use the matrix-free route");
  const Lattice& lat = lattice(s);
  RVec a(n * n, 0.0);
  // fourier entry A(k, k') = V(k - k') + diag
  auto fentry = [&](std::size_t i, std::size_t j) -> cplx {
    const KVec& k = lat.k[i];
    const KVec& l = lat.k[j];
    KVec d{k[0] - l[0], k[1] - l[1], k[2] - l[2]};
    cplx v = s.contains(d) ? V[s.index(d)] : cplx(0.0, 0.0);
    if (i == j) v += -kFourPi2 * lat.k2[i] - shift;
    return v;
  };
  const auto& E = B.elems();
  for (std::size_t q = 0; q < n; ++q) {
    const auto& eq = E[q];
    for (std::size_t p = q; p < n; ++p) {
      const auto& ep = E[p];
      cplx v;
      if (ep.ia == ep.ib && eq.ia == eq.ib) {
        v = fentry(ep.ia, eq.ia);
      } else if (ep.ia == ep.ib) {
        v = fentry(ep.ia, eq.ia) * eq.wa + fentry(ep.ia, eq.ib) * eq.wb;
      } else if (eq.ia == eq.ib) {
        v = std::conj(ep.wa) * fentry(ep.ia, eq.ia) + std::conj(ep.wb) * fentry(ep.ib, eq.ia);
      } else {
        v = std::conj(ep.wa) * (fentry(ep.ia, eq.ia) * eq.wa + fentry(ep.ia, eq.ib) * eq.wb) +
            std::conj(ep.wb) * (fentry(ep.ib, eq.ia) * eq.wa + fentry(ep.ib, eq.ib) * eq.wb);
      }
      a[p + q * n] = v.real();
      a[q + p * n] = v.real();
    }
  }
  return OperatorMatrix(s, std::move(a));
}

double OperatorMatrix::scale() const {
  double m = 0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double OperatorMatrix::asymmetry() const {
  double m = 0;
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t i = j + 1; i < n_; ++i) m = std::max(m, std::abs(a_[i + j * n_] - a_[j + i * n_]));
  return m;
}

RVec OperatorMatrix::apply(const RVec& x) const {
  if (x.size() != n_) throw SpecError("OperatorMatrix::apply: size mismatch");
  RVec y(n_, 0.0);
  cblas_dsymv(CblasColMajor, CblasLower, int(n_), 1.0, a_.data(), int(n_), x.data(), 1, 0.0, y.data(), 1);
  return y;
}

Field OperatorMatrix::apply(const Field& u) const {
  const RealBasis& B = real_basis(spec_);
  CVec c = B.to_coords(u);
  RVec re(n_), im(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    re[i] = c[i].real();
    im[i] = c[i].imag();
  }
  RVec yr = apply(re), yi = apply(im);
  for (std::size_t i = 0; i < n_; ++i) c[i] = cplx(yr[i], yi[i]);
  Field out = B.from_coords(c);
  out.reality = u.reality;
  return out;
}

void OperatorMatrix::compute_spectrum() {
  if (has_spectrum()) return;
  evecs_ = a_;
  evals_.assign(n_, 0.0);
  int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', int(n_), evecs_.data(), int(n_), evals_.data());
  if (info != 0) {
    evals_.clear();
    evecs_.clear();
    throw NumericalFailure("dsyevd failed with info " + std::to_string(info));
  }
}

const RVec& OperatorMatrix::eigenvalues() const {
  if (!has_spectrum()) throw std::logic_error("OperatorMatrix: spectrum not computed");
  return evals_;
}

const RVec& OperatorMatrix::eigenvectors() const {
  if (!has_spectrum()) throw std::logic_error("OperatorMatrix: spectrum not computed");
  return evecs_;
}

CVec OperatorMatrix::apply_function(const std::function<cplx(double)>& phi, const CVec& x) const {
  const RVec& V = eigenvectors();
  const RVec& lam = evals_;
  int n = int(n_);
  // columns: real and imaginary parts
  RVec X(2 * n_), Y(2 * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    X[i] = x[i].real();
    X[n_ + i] = x[i].imag();
  }
  cblas_dgemm(CblasColMajor, CblasTrans, CblasNoTrans, n, 2, n, 1.0, V.data(), n, X.data(), n, 0.0, Y.data(), n);
  for (std::size_t i = 0; i < n_; ++i) {
    cplx z = phi(lam[i]) * cplx(Y[i], Y[n_ + i]);
    Y[i] = z.real();
    Y[n_ + i] = z.imag();
  }
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, 2, n, 1.0, V.data(), n, Y.data(), n, 0.0, X.data(), n);
  CVec out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = cplx(X[i], X[n_ + i]);
  return out;
}

Field OperatorMatrix::apply_function(const std::function<cplx(double)>& phi, const Field& u) const {
  const RealBasis& B = real_basis(spec_);
  return B.from_coords(apply_function(phi, B.to_coords(u)));
}

Field OperatorMatrix::solve_shifted(double shift, const Field& b) const {
  int n = int(n_);
  if (chol_.empty() || chol_shift_ != shift) {
    chol_.assign(n_ * n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = j; i < n_; ++i) chol_[i + j * n_] = -a_[i + j * n_];
    for (std::size_t i = 0; i < n_; ++i) chol_[i + i * n_] += shift;
    int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, chol_.data(), n);
    if (info != 0) {
      chol_.clear();
      throw NumericalFailure("shifted operator is not positive definite (dpotrf info " + std::to_string(info) +
                             ")");
    }
    chol_shift_ = shift;
  }
  const RealBasis& B = real_basis(spec_);
  CVec c = B.to_coords(b);
  RVec X(2 * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    X[i] = c[i].real();
    X[n_ + i] = c[i].imag();
  }
  int info = LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', n, 2, chol_.data(), n, X.data(), n);
  if (info != 0) throw NumericalFailure("dpotrs failed");
  for (std::size_t i = 0; i < n_; ++i) c[i] = cplx(X[i], X[n_ + i]);
  Field out = B.from_coords(c);
  out.reality = b.reality;
  return out;
}

}  // namespace atorus
