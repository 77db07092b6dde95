#pragma once
// Real orthonormal basis of the truncated lattice, dense symmetric operator
// matrices with LAPACK eigensolves, and matrix-free Krylov routines.
//
// Basis: 1, c_k = (e_k + e_-k)/sqrt2, s_k = -i (e_k - e_-k)/sqrt2 for k in the
// lexicographically positive half lattice. Real-valued fields have real
// coordinates; operators that map real fields to real fields become real
// symmetric matrices.

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>

#include "atorus/spectral.hpp"

namespace atorus {

using RVec = std::vector<double>;
using CVec = std::vector<cplx>;
using LinOp = std::function<RVec(const RVec&)>;

class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kMaxDenseRows = 10000;

class RealBasis {
 public:
  struct Elem {
    std::size_t ia, ib;  // lattice indices of k and -k (equal for the zero mode)
    cplx wa, wb;         // coefficients of e_k and e_-k
  };
  explicit RealBasis(const TorusSpec& s);
  const TorusSpec& spec() const { return spec_; }
  std::size_t dim() const { return elems_.size(); }
  const std::vector<Elem>& elems() const { return elems_; }
  // |k|^2 of each basis element
  const RVec& k2() const { return k2_; }

  RVec to_real(const Field& f) const;  // real part of the complex coordinates
  CVec to_coords(const Field& f) const;
  Field from_real(const RVec& c) const;
  Field from_coords(const CVec& c) const;

 private:
  TorusSpec spec_;
  std::vector<Elem> elems_;
  RVec k2_;
};
const RealBasis& real_basis(const TorusSpec& s);

// Dense real symmetric matrix in the real basis (column-major).
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(const TorusSpec& s, RVec entries);

  // Delta + V - shift: diagonal -4 pi^2 |k|^2 - shift plus convolution by V.
  // Throws ResourceError beyond kMaxDenseRows rows.
  static OperatorMatrix schrodinger(const Field& V, double shift);

  const TorusSpec& spec() const { return spec_; }
  std::size_t n() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i + j * n_]; }
  const RVec& data() const { return a_; }
  double scale() const;      // max |entry|
  double asymmetry() const;  // max |a_ij - a_ji|

  RVec apply(const RVec& x) const;
  Field apply(const Field& u) const;  // complex fields allowed

  void compute_spectrum();  // dsyevd, ascending
  bool has_spectrum() const { return !evals_.empty(); }
  const RVec& eigenvalues() const;
  const RVec& eigenvectors() const;  // column-major
  double lambda_min() const { return eigenvalues().front(); }
  double lambda_max() const { return eigenvalues().back(); }

  // phi(M) x through the eigendecomposition
  CVec apply_function(const std::function<cplx(double)>& phi, const CVec& x) const;
  Field apply_function(const std::function<cplx(double)>& phi, const Field& u) const;
  // (shift - M)^{-1} b by Cholesky; throws NumericalFailure if not positive definite.
  Field solve_shifted(double shift, const Field& b) const;

 private:
  TorusSpec spec_{};
  std::size_t n_ = 0;
  RVec a_;
  RVec evals_, evecs_;
  // Cholesky factor cache
  mutable double chol_shift_ = 0;
  mutable RVec chol_;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigResult {
  double value = 0;
  RVec vec;
  int iters = 0;
  bool converged = false;
};
// Lanczos with full reorthogonalization for an extreme eigenvalue of a symmetric operator.
// start: initial vector (random from seed when null). restarts: further cycles started
// from the current Ritz vector when a cycle ends unconverged.
EigResult lanczos_extreme(const LinOp& A, std::size_t n, bool largest, int max_iter = 300,
                          double tol = 1e-10, std::uint64_t seed = 1, const RVec* start = nullptr,
                          int restarts = 0);

struct SolveResult {
  RVec x;
  int iters = 0;
  double rel_residual = 0;
  bool converged = false;
};
// Preconditioned conjugate gradients for a symmetric positive definite operator.
SolveResult conjugate_gradient(const LinOp& A, const RVec& b, double tol = 1e-12, int max_iter = 2000,
                               const LinOp* precond = nullptr);

struct NormEstimate {
  double value = 0;
  int iters = 0;
  bool converged = false;
};
// ||T|| on R^n via power iteration on T* T; stops after max_iter or relative
// Rayleigh stagnation below tol.
NormEstimate operator_norm_power(const LinOp& T, const LinOp& Tadj, std::size_t n, int max_iter = 100,
                                 double tol = 1e-8, std::uint64_t seed = 1);

// OpenBLAS 0.3.20 selects Cooperlake kernels on AVX512-BF16 hosts and returns
// wrong eigenvectors there (n >~ 100). When OPENBLAS_CORETYPE is unset this
// sets it to SkylakeX and re-executes the current binary; call first in main().
void blas_runtime_guard(int argc, char** argv);

double dot(const RVec& a, const RVec& b);
double norm2(const RVec& a);

}  // namespace atorus
