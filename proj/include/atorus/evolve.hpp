#pragma once
// Time evolution for H = A_eps - K_Xi on the truncated basis:
//   i u_t = H u - s u |u|^{p-1}       (NLS, s = +1 defocusing)
//   u_tt  = H u - s u |u|^{p-1}       (wave, real u)
// Linear parts are propagated exactly through the eigendecomposition of A_eps.
// Nonlinear parts act pointwise on the (2K+1)^d collocation grid, where the
// lattice <-> grid map is a bijection and Parseval holds exactly.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "atorus/anderson3d.hpp"

namespace atorus {

enum class Equation { nls, wave, linear_nls, linear_wave };
enum class Scheme { strang, duhamel };

struct Nonlinearity {
  enum class Kind { none, cubic, power, bounded } kind = Kind::cubic;
  double p = 3.0;      // power: |u|^{p-1} u
  double cap = 10.0;   // bounded: h(r) = cap tanh(r / cap), r = |u|^2
  bool focusing = false;
  // h with N(u) = h(|u|^2) u, and the potential density F with dF/du* = N
  double h(double r) const;
  double density(double r) const;
  // real u: N(u) = h(u^2) u, N'(u), N''(u)
  double dN(double u) const;
  double ddN(double u) const;
  double sign() const { return focusing ? -1.0 : 1.0; }
};

struct EvolutionConfig {
  Equation equation = Equation::nls;
  Nonlinearity nonlinearity;
  double dt = 1e-3;
  double T = 1.0;
  Scheme scheme = Scheme::strang;
  int record_every = 1;
  bool keep_snapshots = false;
  double picard_tol = 1e-10;
  int picard_max = 50;
  double blowup_linf = 1e6;
  std::vector<double> snapshot_times;  // always kept, nearest step
  void validate(int dim) const;
};

struct EvolutionTrace {
  std::vector<double> t, mass, energy, tilde_energy, tilde_rhs, linf, h_norm, phi;
  std::vector<double> snap_t;
  std::vector<Field> u, du;  // snapshots (du = u_t)
  std::size_t steps = 0;
  bool wave = false;
};
void write_trace_csv(std::ostream& os, const EvolutionTrace& tr);

// Eigen-coordinates of A_eps on the real basis.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const Hamiltonian& h);
  const Hamiltonian& hamiltonian() const { return h_; }
  std::size_t dim() const { return lam_.size(); }
  double K_Xi() const { return h_.K_Xi; }
  const RVec& a_eigenvalues() const { return lam_; }

  CVec to_eig(const Field& u) const;
  Field from_eig(const CVec& c) const;
  std::vector<CVec> to_eig(const std::vector<Field>& us) const;
  std::vector<Field> from_eig(const std::vector<CVec>& cs) const;
  Field apply(const std::function<cplx(double)>& phi_of_minusH, const Field& u) const;  // phi(-H) u

  Field schrodinger(const Field& u, double t) const;  // e^{-itH} u
  std::pair<Field, Field> wave(const Field& u, const Field& v, double t) const;
  double quad_minus_H(const Field& u) const;  // <u, -H u>
  Field sqrt_minus_H(const Field& u) const;

 private:
  Hamiltonian h_;
  RVec lam_;
  const RVec* V_;
};

Field propagate_linear(const SpectralPropagator& P, const Field& u0, double t);
std::pair<Field, Field> wave_propagate_linear(const SpectralPropagator& P, const Field& u0, const Field& u1,
                                              double t);

// collocation grid helpers
int collocation_n(const TorusSpec& s);
Grid to_colloc(const Field& f);
Field from_colloc(const Grid& g, const TorusSpec& s);

// E = 1/2 <u,-Hu> + int F(|u|^2)  (wave: + 1/2 ||v||^2)
double nls_energy(const SpectralPropagator& P, const Nonlinearity& nl, const Field& u);
double wave_energy(const SpectralPropagator& P, const Nonlinearity& nl, const Field& u, const Field& v);

EvolutionTrace nls_solve(const SpectralPropagator& P, const Field& u0, const EvolutionConfig& cfg);
// Several runs from the same data (different dt or scheme) stepped in lockstep,
// sharing each pass over the eigenvectors.
std::vector<EvolutionTrace> nls_solve_batch(const SpectralPropagator& P, const Field& u0,
                                            const std::vector<EvolutionConfig>& cfgs);
EvolutionTrace wave_solve(const SpectralPropagator& P, const Field& u0, const Field& u1,
                          const EvolutionConfig& cfg);

// printed: exp(log h0 e^{C2 t}) - 1 ; corrected: exp(log(h0+1) e^{C2 t}) - 1
double log_gronwall_bound(double C2, double h0, double t);
double log_gronwall_bound_corrected(double C2, double h0, double t);
// RK4 for rho' = C2 (rho+1) log(rho+1), rho(0) = h0, sampled at ts
std::vector<double> log_gronwall_ode(double C2, double h0, const std::vector<double>& ts, int substeps = 2000);

struct DomainData {
  Field u0, u0_eps;
  double diff = 0;      // ||u0_eps - u0||
  double residual = 0;  // ||H_eps u0_eps - H u0|| / ||H u0||
};
// u0_eps = H_eps^{-1} H u0
DomainData prepare_domain_data(const Hamiltonian& H, const Hamiltonian& H_eps, const Field& u0);
DomainData prepare_domain_data(const OperatorBundle2D& ref, const Hamiltonian& H_eps, const Field& u0_sharp);
DomainData prepare_domain_data(const OperatorBundle3D& ref, const Hamiltonian& H_eps, const Field& u0_sharp);
// (1 + eps sqrt(-H))^{-1} u0 ; with_resolvent: H_eps^{-1} H (1 + eps sqrt(-H))^{-1} u0
Field prepare_energy_data(const SpectralPropagator& P, const Field& u0, double eps,
                          const Hamiltonian* H_eps = nullptr);

struct AprioriReport {
  double max_ratio = 0;  // max over t of observed / envelope
  double sup_mass_ratio = 0;
  double sup_energy_ratio = 0;
  double holder_half = 0;
  bool ok = false;
};
// ||H u(t)|| against A + exp(e^{c E0 t} log(1 + B)) - 1 with B = ||H u0||, A = 0, c = 1
AprioriReport nls_domain_apriori_check(const EvolutionTrace& tr, double E0);
AprioriReport energy_apriori_check(const EvolutionTrace& tr, const SpectralPropagator& P);

struct PhiTable {
  std::vector<double> eps, times;
  std::vector<std::vector<double>> phi;  // [rung][time]
  std::vector<int> inversions;           // per time, across rungs
};
// One reference and a list of rung Hamiltonians sharing K_Xi; nls or wave per cfg.
// Rungs are built one at a time by the factories.
// domain data: rung data H_eps^{-1} H u0, phi with the H (nls) or (-H)^{1/2} (wave) terms.
// energy data: rung data H_eps^{-1} H (1 + eps (-H)^{1/2})^{-1} u0, phi = |u - u_eps| + |(-H)^{1/2} u - (-H_eps)^{1/2} u_eps|.
enum class DataMode { domain, energy };
PhiTable convergence_experiment(const Hamiltonian& ref, const std::vector<std::function<Hamiltonian()>>& rungs,
                                const std::vector<double>& eps, const Field& u0, const Field& u1,
                                const EvolutionConfig& cfg, const std::vector<double>& times,
                                DataMode mode = DataMode::domain);

}  // namespace atorus
