#pragma once
// Truncated Fourier lattice on the unit torus T^d, d = 2 or 3.
// A field is f(x) = sum_k f(k) exp(2 pi i k.x) with |k|_inf <= K.

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace atorus {

using cplx = std::complex<double>;
using KVec = std::array<int, 3>;
using Grid = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPi2 = 4.0 * kPi * kPi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Smallest even n >= 3K+1 with only prime factors 2,3,5,7.
int dealias_grid(int K);

struct TorusSpec {
  int dim = 2;
  int K = 8;
  int grid_n = 0;

  static TorusSpec make(int dim, int K, int grid_n = 0);
  void validate() const;

  int side() const { return 2 * K + 1; }
  std::size_t size() const;
  std::size_t grid_points() const;
  std::size_t index(const KVec& k) const;
  KVec k_of(std::size_t idx) const;
  bool contains(const KVec& k) const;
  // Largest euclidean |k| on the lattice.
  double kmax() const;

  bool operator==(const TorusSpec& o) const {
    return dim == o.dim && K == o.K && grid_n == o.grid_n;
  }
  bool operator!=(const TorusSpec& o) const { return !(*this == o); }
};

std::string to_string(const TorusSpec& s);

// Cached per (dim, K): lattice vectors, |k|^2 and the index of -k.
struct Lattice {
  int dim = 0;
  int K = 0;
  std::vector<KVec> k;
  std::vector<double> k2;
  std::vector<std::size_t> neg;
  std::size_t zero = 0;
};
const Lattice& lattice(const TorusSpec& s);

class Field {
 public:
  Field() = default;
  explicit Field(const TorusSpec& s);
  static Field constant(const TorusSpec& s, cplx c);
  static Field mode(const TorusSpec& s, const KVec& k, cplx c = 1.0);

  const TorusSpec& spec() const { return spec_; }
  std::size_t size() const { return c_.size(); }
  std::vector<cplx>& coeffs() { return c_; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx& operator[](std::size_t i) { return c_[i]; }
  const cplx& operator[](std::size_t i) const { return c_[i]; }
  cplx at(const KVec& k) const;
  void set(const KVec& k, cplx v);

  bool reality = false;
  bool zero_mode_excluded = false;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx a);
  Field& axpy(cplx a, const Field& x);  // this += a x

  // coefficient l2 norm = L2 norm on the unit torus
  double norm() const;
  double max_abs() const;
  // <this, o> = sum conj(this(k)) o(k)
  cplx inner(const Field& o) const;
  // max_k |f(-k) - conj f(k)| relative to max |f|
  double reality_defect() const;
  void enforce_reality();
  Field conj_field() const;  // coefficients of conj(f(x))
  Field real_part() const;   // coefficients of Re f(x)
  void check_invariants(double tol = 1e-12) const;

 private:
  TorusSpec spec_{};
  std::vector<cplx> c_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx a, Field b);
Field operator-(Field a);

void require_same_spec(const Field& a, const Field& b, const char* where);

// ---- transforms ---------------------------------------------------------

// Values on the n^d grid x_j = j/n. Requires n >= 2K+1.
Grid to_grid(const Field& f, int n);
// Forward DFT of grid values, truncated to the lattice of s.
Field from_grid(const Grid& g, int n, const TorusSpec& s);
Grid dft_inverse(const Field& f);                    // on spec.grid_n
Field dft_forward(const Grid& g, const TorusSpec& s);  // from spec.grid_n

// ---- diagonal multipliers -----------------------------------------------

Field laplacian(const Field& f);        // -4 pi^2 |k|^2
Field bessel(const Field& f);           // 1 - Laplacian
Field bessel_inv(const Field& f);       // (1 - Laplacian)^{-1}
Field neg_laplacian_inv(const Field& f);  // (-Laplacian)^{-1}, zero mode dropped
Field deriv(const Field& f, int axis);  // 2 pi i k_axis
std::vector<Field> gradient(const Field& f);
Field divergence(const std::vector<Field>& v);
Field multiply_table(const Field& f, const std::vector<double>& table);

// ---- products -----------------------------------------------------------

// P_K(f g) computed on the spec.grid_n grid; exact when grid_n >= 3K+1.
Field product(const Field& f, const Field& g);
Field dot(const std::vector<Field>& a, const std::vector<Field>& b);

// ---- Littlewood-Paley ---------------------------------------------------

// theta = 1 on [0,3/4], 0 on [4/3,inf), smooth step built from exp(-1/(1-t^2)).
// chi = theta, rho(r) = theta(r/2) - theta(r).
class DyadicPartition {
 public:
  static constexpr double r_inner = 3.0 / 4.0;
  static constexpr double r_chi = 4.0 / 3.0;
  static constexpr double annulus_a = 3.0 / 4.0;
  static constexpr double annulus_b = 8.0 / 3.0;

  double theta(double r) const;
  double chi(double r) const { return theta(r); }
  double rho(double r) const { return theta(0.5 * r) - theta(r); }
  double weight(int j, double r) const;  // chi for j = -1, rho(2^-j r) otherwise
  int j_max(const TorusSpec& s) const;
  // [j+1][idx] block weights, j = -1..j_max
  const std::vector<std::vector<double>>& table(const TorusSpec& s) const;
  std::string id() const { return "bump-exp-3/4-4/3"; }
};
const DyadicPartition& default_partition();

Field lp_block(const Field& f, int j, const DyadicPartition& part = default_partition());
// S_j f = sum_{i=-1}^{j-1} Delta_i f
Field lp_low(const Field& f, int j, const DyadicPartition& part = default_partition());

enum class Side { above, below };
// Sharp euclidean indicator |k| > 2^N (above) or its complement.
Field freq_cutoff(const Field& f, int N, Side side);

// ---- norms --------------------------------------------------------------

struct NormReport {
  double alpha = 0;
  double p = 2;
  double q = 2;
  double value = 0;
  std::vector<std::pair<int, double>> per_block;
  double recompute() const;
};

// L^p norm by quadrature on the spec.grid_n grid (p = kInf: grid max).
double lp_norm(const Field& f, double p);
NormReport besov_norm(const Field& f, double alpha, double p, double q,
                      const DyadicPartition& part = default_partition());
double holder_norm(const Field& f, double alpha,
                   const DyadicPartition& part = default_partition());  // B^alpha_{inf,inf}
double sobolev_norm(const Field& f, double alpha);  // (sum (1+|k|^2)^alpha |f(k)|^2)^{1/2}

// max over |mu| = k_deriv of ||d^mu f||_q / (2^{j(k+d(1/p-1/q))} ||f||_p).
// Throws if f has mass outside the support of block j.
double bernstein_check(const Field& f, int j, int k_deriv, double p, double q,
                       const DyadicPartition& part = default_partition());

// ---- snapshots ----------------------------------------------------------

void write_snapshot_text(std::ostream& os, const Field& f);
Field read_snapshot_text(std::istream& is);
void write_snapshot_binary(std::ostream& os, const Field& f);
Field read_snapshot_binary(std::istream& is);
void save_snapshot(const std::string& path, const Field& f, bool binary);
Field load_snapshot(const std::string& path);

}  // namespace atorus
