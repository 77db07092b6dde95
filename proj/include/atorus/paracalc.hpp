#pragma once
// Bony paraproducts on the truncated lattice.
//   f < g = sum_j S_{j-1} f Delta_j g,   f o g = sum_{|i-j|<=1} Delta_i f Delta_j g,
//   f > g = g < f.
// Every block product is evaluated on the dealiased grid and projected back to K.

#include <cstdint>
#include <functional>
#include <memory>

#include "atorus/spectral.hpp"

namespace atorus {

// Grid values of every Littlewood-Paley block of a field, plus the partial sums S_j.
class BlockGrids {
 public:
  explicit BlockGrids(const Field& f, const DyadicPartition& part = default_partition());

  const TorusSpec& spec() const { return spec_; }
  int j_max() const { return jmax_; }
  // Delta_j f, j = -1..j_max
  const Grid& block(int j) const { return blocks_[j + 1]; }
  // S_j f = sum_{i=-1}^{j-1} Delta_i f; S_{-1} f = 0
  const Grid& low(int j) const;
  const Grid& full() const { return full_; }

 private:
  TorusSpec spec_;
  int jmax_ = 0;
  std::vector<Grid> blocks_;
  std::vector<Grid> lows_;  // lows_[j+1] = S_j f for j = -1..j_max+1
  Grid full_;
};

// Grid accumulator for sums of paraproduct-type terms, finished by one forward FFT.
class GridAccumulator {
 public:
  explicit GridAccumulator(const TorusSpec& s);
  void add_para(const BlockGrids& f, const BlockGrids& g, cplx coef = 1.0);       // f < g
  void add_resonant(const BlockGrids& f, const BlockGrids& g, cplx coef = 1.0);   // f o g
  void add_product(const BlockGrids& f, const BlockGrids& g, cplx coef = 1.0);    // f g
  void add_product(const Grid& f, const Grid& g, cplx coef = 1.0);
  Field finish() const;
  const TorusSpec& spec() const { return spec_; }

 private:
  TorusSpec spec_;
  Grid acc_;
};

struct ProductTriple {
  Field lo_hi;     // f < g
  Field resonant;  // f o g
  Field hi_lo;     // f > g
  Field sum() const { return lo_hi + resonant + hi_lo; }
};

ProductTriple paraproduct(const Field& f, const Field& g,
                          const DyadicPartition& part = default_partition());
Field para_lo(const Field& f, const Field& g, const DyadicPartition& part = default_partition());
Field para_hi(const Field& f, const Field& g, const DyadicPartition& part = default_partition());
Field resonant(const Field& f, const Field& g, const DyadicPartition& part = default_partition());
// f >= g = f > g + f o g
Field para_hi_eq(const Field& f, const Field& g, const DyadicPartition& part = default_partition());

// C(f,g,h) = (f < g) o h - f (g o h)
Field commutator_C(const Field& f, const Field& g, const Field& h,
                   const DyadicPartition& part = default_partition());
// C_N(f,g,h) = (Delta_{>N}(f < g)) o h - f (g o h)
Field commutator_CN(const Field& f, const Field& g, const Field& h, int N,
                    const DyadicPartition& part = default_partition());

// Real bilinear pairing (a, b) = int a b = sum_k a(k) b(-k).
cplx pairing(const Field& a, const Field& b);
// D(f,g,h) = (f, h o g) - (f < g, h)
cplx adjoint_defect_D(const Field& f, const Field& g, const Field& h,
                      const DyadicPartition& part = default_partition());

// R(f,g) = (1-Delta)^{-1}(f < g) - f < (1-Delta)^{-1} g
Field para_resolvent_R(const Field& f, const Field& g,
                       const DyadicPartition& part = default_partition());

struct Paralinearization {
  Field para_part;  // F'(f) < f
  Field remainder;  // F(f) - F'(f) < f
};
// F and F' are evaluated pointwise on the dealiased grid; f must be real.
Paralinearization paralinearize(const std::function<double(double)>& F,
                                const std::function<double(double)>& dF, const Field& f,
                                const DyadicPartition& part = default_partition());

// Random field with coefficients sigma g_k / (1+|k|)^{s+d/2}, g_k standard complex Gaussian,
// hermitian (real-valued field). Deterministic in seed.
Field rough_field(const TorusSpec& spec, double s, std::uint64_t seed, double sigma = 1.0);
// Same, restricted to |k|_inf <= band.
Field smooth_field(const TorusSpec& spec, int band, std::uint64_t seed, double sigma = 1.0);

}  // namespace atorus
