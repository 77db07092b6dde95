#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include <unistd.h>

#include <lapacke.h>

#include "atorus/linalg.hpp"

namespace atorus {

double dot(const RVec& a, const RVec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const RVec& a) { return std::sqrt(dot(a, a)); }

namespace {

RVec random_unit(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RVec v(n);
  for (double& x : v) x = nd(rng);
  double r = norm2(v);
  for (double& x : v) x /= r;
  return v;
}

}  // namespace

EigResult lanczos_extreme(const LinOp& A, std::size_t n, bool largest, int max_iter, double tol,
                          std::uint64_t seed, const RVec* start, int restarts) {
  EigResult res;
  int m_max = std::min<int>(max_iter, int(n));
  std::vector<RVec> Q;
  if (start) {
    RVec v = *start;
    double r = norm2(v);
    if (!(r > 0)) throw std::invalid_argument("lanczos_extreme: zero start vector");
    for (double& x : v) x /= r;
    Q.push_back(std::move(v));
  } else {
    Q.push_back(random_unit(n, seed));
  }
  RVec alpha, beta;
  RVec ritz;
  for (int m = 0; m < m_max; ++m) {
    RVec w = A(Q[m]);
    double a = dot(w, Q[m]);
    alpha.push_back(a);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      for (const RVec& q : Q) {
        double c = dot(w, q);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
      }
    double b = norm2(w);

    int k = m + 1;
    RVec d(alpha), e(beta), z(std::size_t(k) * k);
    e.resize(std::max(1, k - 1));
    int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', k, d.data(), e.data(), z.data(), k);
    if (info != 0) throw NumericalFailure("dstev failed in Lanczos");
    int idx = largest ? k - 1 : 0;
    double theta = d[idx];
    double resid = std::abs(b * z[std::size_t(idx) * k + (k - 1)]);
    res.iters = k;
    res.value = theta;
    ritz.assign(z.begin() + std::size_t(idx) * k, z.begin() + std::size_t(idx + 1) * k);
    // residual measured against the spread of the Ritz values (an estimate of ||A||)
    double scale = std::max({1.0, std::abs(d[0]), std::abs(d[k - 1])});
    bool done = resid <= tol * scale || b < 1e-300 || k == int(n);
    if (done || m + 1 == m_max) {
      res.converged = done;
      break;
    }
    beta.push_back(b);
    for (double& x : w) x /= b;
    Q.push_back(std::move(w));
  }
  res.vec.assign(n, 0.0);
  for (std::size_t j = 0; j < ritz.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) res.vec[i] += ritz[j] * Q[j][i];
  if (!res.converged && restarts > 0) {
    Q.clear();
    EigResult next = lanczos_extreme(A, n, largest, max_iter, tol, seed, &res.vec, restarts - 1);
    next.iters += res.iters;
    return next;
  }
  return res;
}

SolveResult conjugate_gradient(const LinOp& A, const RVec& b, double tol, int max_iter, const LinOp* precond) {
  SolveResult r;
  std::size_t n = b.size();
  r.x.assign(n, 0.0);
  double bn = norm2(b);
  if (bn == 0.0) {
    r.converged = true;
    return r;
  }
  RVec res = b;
  RVec z = precond ? (*precond)(res) : res;
  RVec p = z;
  double rz = dot(res, z);
  for (int it = 1; it <= max_iter; ++it) {
    RVec Ap = A(p);
    double pAp = dot(p, Ap);
    if (!(pAp > 0)) throw NumericalFailure("conjugate_gradient: operator not positive definite");
    double al = rz / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      r.x[i] += al * p[i];
      res[i] -= al * Ap[i];
    }
    r.iters = it;
    r.rel_residual = norm2(res) / bn;
    if (r.rel_residual <= tol) {
      r.converged = true;
      break;
    }
    z = precond ? (*precond)(res) : res;
    double rz_new = dot(res, z);
    double be = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + be * p[i];
  }
  // true residual
  RVec Ax = A(r.x);
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += (b[i] - Ax[i]) * (b[i] - Ax[i]);
  r.rel_residual = std::sqrt(s) / bn;
  r.converged = r.rel_residual <= 10 * tol;
  return r;
}

NormEstimate operator_norm_power(const LinOp& T, const LinOp& Tadj, std::size_t n, int max_iter, double tol,
                                 std::uint64_t seed) {
  NormEstimate est;
  RVec v = random_unit(n, seed);
  double prev = -1;
  for (int it = 1; it <= max_iter; ++it) {
    RVec w = Tadj(T(v));
    double ray = dot(v, w);  // ||T v||^2
    est.value = std::sqrt(std::max(0.0, ray));
    est.iters = it;
    double wn = norm2(w);
    if (wn == 0.0) {
      est.value = 0.0;
      est.converged = true;
      break;
    }
    if (prev >= 0 && std::abs(ray - prev) <= tol * std::abs(ray)) {
      est.converged = true;
      break;
    }
    prev = ray;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
  }
  return est;
}

void blas_runtime_guard(int argc, char** argv) {
  if (std::getenv("OPENBLAS_CORETYPE")) return;
  ::setenv("OPENBLAS_CORETYPE", "SkylakeX", 1);
  std::vector<char*> args(argv, argv + argc);
  args.push_back(nullptr);
  ::execv("/proc/self/exe", args.data());
  // exec failed: continue with whatever kernels were selected
}

}  // namespace atorus
