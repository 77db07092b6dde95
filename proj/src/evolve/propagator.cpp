#include <algorithm>
#include <cmath>

#include <cblas.h>

#include "atorus/evolve.hpp"

namespace atorus {

double Nonlinearity::h(double r) const {
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::cubic: return r;
    case Kind::power: return std::pow(r, 0.5 * (p - 1.0));
    case Kind::bounded: return cap * std::tanh(r / cap);
  }
  return 0.0;
}

// F(r) with F'(r) = h(r)/2, so that int F(|u|^2) has gradient h(|u|^2) u
double Nonlinearity::density(double r) const {
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::cubic: return 0.25 * r * r;
    case Kind::power: return std::pow(r, 0.5 * (p + 1.0)) / (p + 1.0);
    case Kind::bounded: {
      double x = r / cap;
      // log cosh, overflow-safe
      double lc = std::abs(x) + std::log1p(std::exp(-2.0 * std::abs(x))) - std::log(2.0);
      return 0.5 * cap * cap * lc;
    }
  }
  return 0.0;
}

double Nonlinearity::dN(double u) const {
  double r = u * u;
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::cubic: return 3.0 * r;
    case Kind::power: return p * std::pow(r, 0.5 * (p - 1.0));
    case Kind::bounded: {
      double c = 1.0 / std::cosh(r / cap);
      return cap * std::tanh(r / cap) + 2.0 * r * c * c;
    }
  }
  return 0.0;
}

double Nonlinearity::ddN(double u) const {
  double r = u * u;
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::cubic: return 6.0 * u;
    case Kind::power: return r == 0.0 ? 0.0 : p * (p - 1.0) * std::pow(r, 0.5 * (p - 3.0)) * u;
    case Kind::bounded: {
      double c = 1.0 / std::cosh(r / cap), t = std::tanh(r / cap);
      return 6.0 * u * c * c - 8.0 * u * r / cap * c * c * t;
    }
  }
  return 0.0;
}

void EvolutionConfig::validate(int dim) const {
  if (!(dt > 0)) throw std::invalid_argument("EvolutionConfig: dt must be > 0");
  if (!(T >= dt)) throw std::invalid_argument("EvolutionConfig: T must be >= dt");
  if (record_every < 1) throw std::invalid_argument("EvolutionConfig: record_every must be >= 1");
  if (nonlinearity.kind == Nonlinearity::Kind::power && !(nonlinearity.p > 1))
    throw std::invalid_argument("EvolutionConfig: power p must exceed 1");
  if (nonlinearity.kind == Nonlinearity::Kind::bounded && !(nonlinearity.cap > 0))
    throw std::invalid_argument("EvolutionConfig: bounded cap must be > 0");
  (void)dim;
}

SpectralPropagator::SpectralPropagator(const Hamiltonian& h) : h_(h) {
  h_.ensure_spectrum();
  lam_ = h_.matrix().eigenvalues();
  V_ = &h_.matrix().eigenvectors();
  for (double l : lam_)
    if (!(h_.K_Xi - l > 0)) throw NumericalFailure("SpectralPropagator: -H is not positive definite");
}

std::vector<CVec> SpectralPropagator::to_eig(const std::vector<Field>& us) const {
  const RealBasis& rb = real_basis(h_.spec());
  std::size_t n = dim(), m = us.size();
  RVec X(2 * m * n), Y(2 * m * n);
  for (std::size_t j = 0; j < m; ++j) {
    CVec c = rb.to_coords(us[j]);
    for (std::size_t i = 0; i < n; ++i) {
      X[2 * j * n + i] = c[i].real();
      X[(2 * j + 1) * n + i] = c[i].imag();
    }
  }
  cblas_dgemm(CblasColMajor, CblasTrans, CblasNoTrans, int(n), int(2 * m), int(n), 1.0, V_->data(), int(n),
              X.data(), int(n), 0.0, Y.data(), int(n));
  std::vector<CVec> out(m, CVec(n));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) out[j][i] = cplx(Y[2 * j * n + i], Y[(2 * j + 1) * n + i]);
  return out;
}

std::vector<Field> SpectralPropagator::from_eig(const std::vector<CVec>& cs) const {
  const RealBasis& rb = real_basis(h_.spec());
  std::size_t n = dim(), m = cs.size();
  RVec X(2 * m * n), Y(2 * m * n);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      X[2 * j * n + i] = cs[j][i].real();
      X[(2 * j + 1) * n + i] = cs[j][i].imag();
    }
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, int(n), int(2 * m), int(n), 1.0, V_->data(), int(n),
              X.data(), int(n), 0.0, Y.data(), int(n));
  std::vector<Field> out;
  for (std::size_t j = 0; j < m; ++j) {
    CVec c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = cplx(Y[2 * j * n + i], Y[(2 * j + 1) * n + i]);
    out.push_back(rb.from_coords(c));
  }
  return out;
}

CVec SpectralPropagator::to_eig(const Field& u) const { return to_eig(std::vector<Field>{u})[0]; }
Field SpectralPropagator::from_eig(const CVec& c) const { return from_eig(std::vector<CVec>{c})[0]; }

Field SpectralPropagator::apply(const std::function<cplx(double)>& phi, const Field& u) const {
  CVec c = to_eig(u);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= phi(h_.K_Xi - lam_[i]);
  Field out = from_eig(c);
  out.reality = u.reality;
  return out;
}

Field SpectralPropagator::schrodinger(const Field& u, double t) const {
  // e^{-itH} = e^{it(-H)}
  return apply([t](double m) { return std::exp(cplx(0.0, t * m)); }, u);
}

std::pair<Field, Field> SpectralPropagator::wave(const Field& u, const Field& v, double t) const {
  auto c = to_eig(std::vector<Field>{u, v});
  std::vector<CVec> r(2, CVec(dim()));
  for (std::size_t i = 0; i < dim(); ++i) {
    double w = std::sqrt(h_.K_Xi - lam_[i]);
    double cs = std::cos(w * t), sn = std::sin(w * t);
    r[0][i] = cs * c[0][i] + (sn / w) * c[1][i];
    r[1][i] = -w * sn * c[0][i] + cs * c[1][i];
  }
  auto f = from_eig(r);
  f[0].reality = u.reality;
  f[1].reality = v.reality;
  return {f[0], f[1]};
}

double SpectralPropagator::quad_minus_H(const Field& u) const {
  CVec c = to_eig(u);
  double s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += (h_.K_Xi - lam_[i]) * std::norm(c[i]);
  return s;
}

Field SpectralPropagator::sqrt_minus_H(const Field& u) const {
  return apply([](double m) { return cplx(std::sqrt(m), 0.0); }, u);
}

Field propagate_linear(const SpectralPropagator& P, const Field& u0, double t) { return P.schrodinger(u0, t); }

std::pair<Field, Field> wave_propagate_linear(const SpectralPropagator& P, const Field& u0, const Field& u1,
                                              double t) {
  return P.wave(u0, u1, t);
}

int collocation_n(const TorusSpec& s) { return 2 * s.K + 1; }
Grid to_colloc(const Field& f) { return to_grid(f, collocation_n(f.spec())); }
Field from_colloc(const Grid& g, const TorusSpec& s) { return from_grid(g, collocation_n(s), s); }

namespace {

double mean_density(const Nonlinearity& nl, const Grid& g) {
  double s = 0;
  for (const cplx& z : g) s += nl.density(std::norm(z));
  return s / double(g.size());
}

}  // namespace

double nls_energy(const SpectralPropagator& P, const Nonlinearity& nl, const Field& u) {
  return 0.5 * P.quad_minus_H(u) + nl.sign() * mean_density(nl, to_colloc(u));
}

double wave_energy(const SpectralPropagator& P, const Nonlinearity& nl, const Field& u, const Field& v) {
  return 0.5 * v.norm() * v.norm() + nls_energy(P, nl, u);
}

double log_gronwall_bound(double C2, double h0, double t) {
  if (!(C2 >= 1.0) || !(h0 > 0) || !(std::log(h0) >= 1.0 - 1e-12))
    throw std::domain_error("log_gronwall_bound: needs C2 >= 1 and log h0 >= 1");
  return std::exp(std::log(h0) * std::exp(C2 * t)) - 1.0;
}

double log_gronwall_bound_corrected(double C2, double h0, double t) {
  if (!(C2 > 0) || !(h0 >= 0)) throw std::domain_error("log_gronwall_bound_corrected: bad arguments");
  return std::exp(std::log1p(h0) * std::exp(C2 * t)) - 1.0;
}

std::vector<double> log_gronwall_ode(double C2, double h0, const std::vector<double>& ts, int substeps) {
  auto f = [C2](double r) { return C2 * (r + 1.0) * std::log1p(r); };
  std::vector<double> out;
  double t = 0, r = h0;
  for (double target : ts) {
    if (target < t) throw std::invalid_argument("log_gronwall_ode: times must increase");
    // step limited by the local growth rate C2 (1 + log(1 + r))
    while (t < target) {
      double h = std::min({target - t, 1.0 / substeps, 0.002 / (C2 * (1.0 + std::log1p(r)))});
      double k1 = f(r), k2 = f(r + 0.5 * h * k1), k3 = f(r + 0.5 * h * k2), k4 = f(r + h * k3);
      r += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      t = (target - t - h <= 0) ? target : t + h;
    }
    t = target;
    out.push_back(r);
  }
  return out;
}

}  // namespace atorus
