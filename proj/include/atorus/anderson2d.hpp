#pragma once
// The 2-d renormalized Anderson Hamiltonian at finite K.
//   X = (1-Delta)^{-1} xi_eps,  Xi2 = xi_eps o X - c_eps
//   B(u) = (1-Delta)^{-1}(Delta u < X + 2 grad u < grad X + xi < u - u < Xi2)
//   u = D_{>N}(u < X + B(u)) + u#
//   A u = Delta u# + u# o xi + G(u)
// A_eps = Delta + xi_eps - c_eps is the direct (matrix) route.

#include <memory>
#include <optional>

#include "atorus/linalg.hpp"
#include "atorus/noise.hpp"
#include "atorus/paraop.hpp"

namespace atorus {

// consistent: the G(u) and Xi2 sign that make A = A_eps exactly at finite K.
// as_printed: Xi2 = xi o X + c and the printed G, kept for comparison.
enum class Formulation { consistent, as_printed };

struct ParacontrolledPair {
  Field u;
  Field u_sharp;  // exact remainder of u
  int N = 0;
  double residual = 0;  // ||u_sharp - requested u_sharp|| / ||requested||
  int iterations = 0;
};

// A_eps = Delta + V - c on the truncated basis, shifted by K_Xi: H = A_eps - K_Xi.
// Dense (OperatorMatrix) or matrix-free (grid products).
class Hamiltonian {
 public:
  Hamiltonian() = default;
  Hamiltonian(const Field& V, double c, bool dense);

  const TorusSpec& spec() const { return V_.spec(); }
  const Field& potential() const { return V_; }
  double c() const { return c_; }
  bool dense() const { return static_cast<bool>(M_); }
  OperatorMatrix& matrix() const;

  Field apply_A(const Field& u) const;  // Delta u + V u - c u
  // largest eigenvalue of A_eps (Lanczos, or the dense spectrum when present)
  double lambda_max() const;
  void ensure_spectrum() const;

  double K_Xi = 0;
  Field apply_H(const Field& u) const;        // A u - K_Xi u
  Field apply_minus_H(const Field& u) const;  // K_Xi u - A u
  enum class Route { matrix, iterative };
  // u with (K_Xi - A_eps) u = f
  Field resolvent(const Field& f, Route via, double tol = 1e-12) const;
  double energy_norm(const Field& u) const;  // sqrt <u, -H u>

 private:
  Field V_;
  double c_ = 0;
  std::shared_ptr<OperatorMatrix> M_;
};

class Paracontrolled2D {
 public:
  Paracontrolled2D(std::shared_ptr<const EnhancedNoise2D> noise, int N,
                   Formulation form = Formulation::consistent);

  const EnhancedNoise2D& noise() const { return *noise_; }
  int N() const { return N_; }
  Formulation formulation() const { return form_; }
  const Field& Xi2() const { return Xi2_; }

  Field B(const Field& u) const;
  Field T(const Field& u) const;  // D_{>N}(u < X + B(u))
  Field T_adjoint(const Field& h) const;
  double contraction(int max_iter = 100, double tol = 1e-8) const;  // ||T|| on L^2

  ParacontrolledPair gamma(const Field& u_sharp, double tol = 1e-10, int max_iter = 200) const;
  Field gamma_inverse(const Field& u) const;
  Field G(const Field& u) const;
  Field apply_A(const ParacontrolledPair& p) const;
  Field apply_A_eps(const Field& u) const;

 private:
  std::shared_ptr<const EnhancedNoise2D> noise_;
  int N_;
  Formulation form_;
  Field Xi2_;
  std::unique_ptr<ParaOperator> Bop_, Top_;
};

Field b_xi(const Field& u, const EnhancedNoise2D& noise, Formulation form = Formulation::consistent);
// Smallest N with ||T_N||_{L^2} <= target; throws NumericalFailure when 2^N > K sqrt(2) first.
int choose_N(const EnhancedNoise2D& noise, double target = 0.5, Formulation form = Formulation::consistent,
             double* achieved = nullptr);
ParacontrolledPair gamma_map(const Field& u_sharp, const EnhancedNoise2D& noise, int N);
Field gamma_inverse(const Field& u, const EnhancedNoise2D& noise, int N);
Field apply_A(const ParacontrolledPair& pair, const EnhancedNoise2D& noise,
              Formulation form = Formulation::consistent);
OperatorMatrix assemble_matrix_eps(const EnhancedNoise2D& noise);

struct BundleOptions {
  double margin = 1.0;
  double target = 0.5;
  bool dense = true;
  int N_override = -1;
  std::optional<double> K_Xi_override;
  Formulation form = Formulation::consistent;
};

struct OperatorBundle2D {
  std::shared_ptr<const EnhancedNoise2D> noise;
  std::shared_ptr<const Paracontrolled2D> pc;
  Hamiltonian ham;
  int N = 0;
  double lambda_max = 0;
  double margin = 0;
  double K_Xi() const { return ham.K_Xi; }
  double C_Xi = 0;
  bool C_Xi_calibrated = false;
};

OperatorBundle2D shift_and_bundle(const EnhancedNoise2D& noise, const BundleOptions& opt = {});
Field resolvent_apply(const OperatorBundle2D& b, const Field& f, Hamiltonian::Route via);
double energy_norm(const OperatorBundle2D& b, const Field& u);
// -<u,Au> + C_Xi ||u||^2 - 1/2 ||grad u#||^2
double lower_bound_check(const OperatorBundle2D& b, const ParacontrolledPair& p);
// sup (1/2 ||grad u#||^2 + <u,Au>) / ||u||^2 over samples; sets C_Xi = 2 max(sup, 0)
double calibrate_C_Xi(OperatorBundle2D& b, const std::vector<ParacontrolledPair>& samples);

struct LadderTable {
  std::vector<double> eps;
  double K_Xi = 0;                        // common shift
  std::vector<std::vector<double>> diff;  // [sample][rung i] = ||R_i f - R_{i+1} f||_{H^gamma}
  std::vector<double> opnorm;             // max over samples, per rung pair
  std::vector<int> inversions;            // per sample
};
// R_i = (K_Xi - Delta - V_i + c_i)^{-1} with a common K_Xi (max over rungs + margin),
// differences measured in H^s.
LadderTable resolvent_ladder(const std::vector<Field>& V, const std::vector<double>& c,
                             const std::vector<double>& eps, const std::vector<Field>& fs, double s,
                             double margin = 1.0);
LadderTable resolvent_ladder(const std::vector<std::shared_ptr<const EnhancedNoise2D>>& rungs,
                             const std::vector<Field>& fs, double gamma, double margin = 1.0);
int count_inversions(const std::vector<double>& seq);  // adjacent increases

struct IneqReport {
  double max_bg = 0;        // ||u||_inf / (||u||_D sqrt(1 + log(1 + ||Hu||)))
  double max_l4 = 0;        // ||u||_4 / ||u||_D
  double max_l6 = 0;
  double max_linf_h = 0;    // ||u||_inf / ||Hu||
  std::size_t samples = 0;
};
IneqReport functional_ineq_report(const Hamiltonian& h, const std::vector<Field>& samples);

// K-consistent random field: sample_white_noise(seed) times (1+|k|)^{-(s + d/2)}, real.
Field consistent_field(const TorusSpec& spec, double s, std::uint64_t seed, double sigma = 1.0);

}  // namespace atorus
