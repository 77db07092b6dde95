#pragma once
// The 3-d renormalized Anderson Hamiltonian through u = e^W u_flat.
//   F(v) = Delta v + 2 L Wt . grad v + (L Z) v     (L = 1 - Delta)
//   A u  = e^W F(e^{-W} u)  =  Delta u + xi u - (c1 + c2) u
//   v = D_{>N}(v < Z + 2 grad v < Wt + B(v)) + v#
//   F(v) = Delta v# + L Z o v# + 2 L Wt o grad v# + G(v)

#include "atorus/anderson2d.hpp"

namespace atorus {

struct FlatSharpTriple {
  Field u;        // P_K(e^W u_flat)
  Field u_flat;
  Field u_sharp;  // exact remainder of u_flat
  int N = 0;
  double residual = 0;
  int iterations = 0;
};

class Paracontrolled3D {
 public:
  Paracontrolled3D(std::shared_ptr<const EnhancedNoise3D> noise, int N);

  const EnhancedNoise3D& noise() const { return *noise_; }
  const ExpLift& lift() const { return lift_; }
  int N() const { return N_; }

  Field B(const Field& v) const;
  Field T(const Field& v) const;  // D_{>N}(v < Z + 2 grad v < Wt + B(v))
  Field T_adjoint(const Field& h) const;
  double contraction(int max_iter = 100, double tol = 1e-8) const;

  FlatSharpTriple gamma(const Field& u_sharp, double tol = 1e-10, int max_iter = 200) const;
  Field gamma_inverse(const Field& u_flat) const;
  FlatSharpTriple from_flat(const Field& u_flat) const;

  Field G(const Field& v) const;
  Field flat_operator(const FlatSharpTriple& t) const;  // paracontrolled F(u_flat)
  Field flat_operator_direct(const Field& v) const;     // Delta v + 2 L Wt . grad v + L Z v
  Field apply_A(const FlatSharpTriple& t) const;        // P_K(e^W F(u_flat))
  Field apply_A_eps(const Field& u) const;              // Delta u + xi u - (c1 + c2) u
  Field lift_up(const Field& v) const;                  // P_K(e^W v)
  Field lift_down(const Field& u) const;                // P_K(e^{-W} u)

 private:
  std::shared_ptr<const EnhancedNoise3D> noise_;
  int N_;
  ExpLift lift_;
  Field LZ_;
  std::vector<Field> LWt_;
  std::unique_ptr<ParaOperator> Bop_, Top_, Sop_;
};

Field b_xi_3d(const Field& u_flat, const EnhancedNoise3D& noise);
int choose_N_3d(const EnhancedNoise3D& noise, double target = 0.5, double* achieved = nullptr);
FlatSharpTriple gamma_map_3d(const Field& u_sharp, const EnhancedNoise3D& noise, int N);
Field gamma_inverse_3d(const Field& u_flat, const EnhancedNoise3D& noise, int N);
Field apply_A_3d(const FlatSharpTriple& t, const EnhancedNoise3D& noise);
OperatorMatrix assemble_matrix_eps_3d(const EnhancedNoise3D& noise);

struct OperatorBundle3D {
  std::shared_ptr<const EnhancedNoise3D> noise;
  std::shared_ptr<const Paracontrolled3D> pc;
  Hamiltonian ham;  // c = c1 + c2
  int N = 0;
  double lambda_max = 0;
  double margin = 0;
  double K_Xi() const { return ham.K_Xi; }
  double C_Xi = 0;
  bool C_Xi_calibrated = false;
  double exp_m2W_sup = 0;  // ||e^{-2W}||_inf on the grid
};

OperatorBundle3D shift_and_bundle_3d(const EnhancedNoise3D& noise, const BundleOptions& opt = {});
Field resolvent_apply_3d(const OperatorBundle3D& b, const Field& f, Hamiltonian::Route via);
LadderTable resolvent_ladder_3d(const std::vector<std::shared_ptr<const EnhancedNoise3D>>& rungs,
                                const std::vector<Field>& fs, double beta, double margin = 1.0);

// ||e^{-2W}||_inf (-<u,Au> + C_Xi ||u||^2) - ||grad u_flat||^2
double h1_flat_bound_check(const OperatorBundle3D& b, const FlatSharpTriple& t);
// sup (||grad u_flat||^2 / ||e^{-2W}||_inf + <u,Au>) / ||u||^2; sets C_Xi = 2 max(sup, 0)
double calibrate_C_Xi_3d(OperatorBundle3D& b, const std::vector<FlatSharpTriple>& samples);
// ||u||_inf / (||Hu||^{1/2} ||(-H)^{1/2} u||^{1/2}); 0 for u = 0
double agmon_ratio(const Hamiltonian& h, const Field& u);

struct ZProductReport {
  double norm_para = 0;   // C^{alpha-1} norm, paralinearization route
  double norm_direct = 0;
  double rel_diff = 0;
  Field para, direct;
};
// e^{2W} (1-Delta) Z by e^{2W} < LZ + e^{2W} > LZ + C(2e^{2W}, W, LZ) + 2 e^{2W}(W o LZ) + R o LZ
// against the grid product.
ZProductReport z_product_check(const EnhancedNoise3D& noise);

}  // namespace atorus
