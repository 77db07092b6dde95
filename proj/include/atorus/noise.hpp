#pragma once
// White noise on the lattice, mollification, renormalization constants and the
// enhanced-noise data for the 2-d and 3-d Hamiltonians.

#include <cstdint>
#include <functional>
#include <string>

#include "atorus/paracalc.hpp"

namespace atorus {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Mollifier {
  std::string id;
  double support = 1.0;  // m(x) = 0 for |x| >= support
  std::function<double(double)> profile;
  double operator()(double r) const { return r >= support ? 0.0 : profile(r); }
};

// m(x) = exp(1 - 1/(1-x^2)) on |x| < 1
Mollifier bump_mollifier();
// m(x) = cos(pi x/2) exp((1 - 1/(1-x^2))/2) on |x| < 1
Mollifier cosine_mollifier();
// m = 0 everywhere
Mollifier zero_mollifier();
// m = 1 everywhere: the unmollified lattice noise (eps -> 0 at fixed K)
Mollifier identity_mollifier();
Mollifier mollifier_by_id(const std::string& id);

// xi(k) i.i.d. standard complex Gaussian (E|xi(k)|^2 = 1) with xi(-k) = conj xi(k).
// Each coefficient depends only on (seed, k), so lattices of different K share
// their common modes. 2-d: xi(0) real N(0,1). 3-d: xi(0) = 0.
Field sample_white_noise(std::uint64_t seed, const TorusSpec& spec);

// coefficientwise xi(k) m(eps |k|)
Field mollify(const Field& xi, double eps, const Mollifier& m);

// True when m(eps .) has support outside |k|_inf <= K.
bool mollifier_truncated(double eps, const Mollifier& m, int K);

// c_eps = sum_{|k|_inf <= K} |m(eps k)|^2 / (1 + 4 pi^2 |k|^2), k = 0 included
double renorm_const_2d(double eps, const Mollifier& m, int K, bool* truncated = nullptr);

enum class C2Mode { absolute, signed_dot };

struct Renorm3D {
  double c1 = 0;
  double c2 = 0;
  bool truncated = false;
};
// c1 = sum_{k != 0} |m|^2 / (4 pi^2 |k|^2)
double renorm_c1_3d(double eps, const Mollifier& m, int K, bool* truncated = nullptr);
// c2 = (2 pi)^{-6} sum_{k1 != k2, k1,k2 != 0} |m1|^2 |m2|^2 |k1.k2| / (|k1-k2|^2 |k1|^4 |k2|^2)
double renorm_c2_3d(double eps, const Mollifier& m, int K, C2Mode mode = C2Mode::absolute);
Renorm3D renorm_const_3d(double eps, const Mollifier& m, int K, C2Mode mode = C2Mode::absolute);

struct EnhancedNoise2D {
  double eps = 0;
  std::uint64_t seed = 0;
  std::string mollifier_id;
  Field xi;   // xi_eps
  Field X;    // (1-Delta)^{-1} xi_eps
  Field Xi2;  // xi_eps o X - c_eps
  double c_eps = 0;
  bool truncated = false;
  double alpha = -1.1;
  double norm_xi = 0;   // C^alpha
  double norm_Xi2 = 0;  // C^{2 alpha + 2}
};

EnhancedNoise2D enhance_2d(const Field& xi_raw, std::uint64_t seed, double eps, const Mollifier& m,
                           double alpha = -1.1);
EnhancedNoise2D enhance_2d(std::uint64_t seed, double eps, const Mollifier& m, const TorusSpec& spec,
                           double alpha = -1.1);

struct EnhancedNoise3D {
  double eps = 0;
  std::uint64_t seed = 0;
  std::string mollifier_id;
  C2Mode c2_mode = C2Mode::absolute;
  Field xi;  // xi_eps, zero mode excluded
  Field X;   // (-Delta)^{-1} xi_eps
  Field X1;  // (1-Delta)^{-1}(|grad X|^2 - c1)
  Field X2;  // 2 (1-Delta)^{-1}(grad X . grad X1)
  Field X3;  // (1-Delta)^{-1}(grad X . grad X2)
  Field X4;  // (1-Delta)^{-1}(|grad X1|^2 - c2)
  Field gradX_res_gradX3;  // sum_i d_i X o d_i X3
  double c1 = 0;
  double c2 = 0;
  bool truncated = false;
  // derived
  Field W;                  // X + X1 + X2
  std::vector<Field> Wt;    // (1-Delta)^{-1} grad W
  Field Z;                  // (1-Delta)^{-1}(|grad X2|^2 + 2 grad X1.grad X2 + X1 + X2) + X4 + 2 X3
  double alpha = 0.45;
  // C^alpha, C^{2alpha}, C^{alpha+1}, C^{alpha+1}, C^{4alpha}, C^{2alpha-1}
  std::array<double, 6> norms{};
};

// c1, c2 are computed on the lattice of spec unless given explicitly (NaN = compute).
EnhancedNoise3D enhance_3d(const Field& xi_raw, std::uint64_t seed, double eps, const Mollifier& m,
                           C2Mode mode = C2Mode::absolute, double alpha = 0.45);
EnhancedNoise3D enhance_3d(std::uint64_t seed, double eps, const Mollifier& m, const TorusSpec& spec,
                           C2Mode mode = C2Mode::absolute, double alpha = 0.45);
// Rebuild W, Wt, Z from the tree components.
void derive_3d(EnhancedNoise3D& n);

struct ExpLift {
  Grid expW, expmW;  // exact pointwise values of e^W, e^{-W} on the grid
  Field eX, eX1, eX2, eW, emW, e2W;  // truncated to the lattice
};
// Throws NumericalError when max |W| exceeds 700.
ExpLift exp_lift(const EnhancedNoise3D& n);

// Grid exponential of a real field, projected to the lattice.
Field exp_field(const Field& f, double sign = 1.0);
// P_K(e^{sign W} u) from grid values.
Field exp_multiply(const Grid& expgrid, const Field& u);

}  // namespace atorus
