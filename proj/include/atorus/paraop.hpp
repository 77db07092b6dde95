#pragma once
// Linear operators of the form
//   f -> outer( sum_t c_t post_t[ (pre_t f) < g_t ]  +  sum_t c_t post_t[ g_t < (pre_t f) ] )
// with Fourier multipliers pre/post/outer, and their exact adjoints for the
// inner product <a,b> = sum conj(a(k)) b(k).

#include <map>
#include <memory>
#include <string>

#include "atorus/paracalc.hpp"

namespace atorus {

struct Multiplier {
  std::string id;        // empty: identity
  std::vector<cplx> t;   // per lattice index
  bool identity() const { return id.empty(); }
  Field apply(const Field& f) const;
  Field apply_adjoint(const Field& f) const;
};

Multiplier mult_identity();
Multiplier mult_deriv(const TorusSpec& s, int axis);
Multiplier mult_laplacian(const TorusSpec& s);
Multiplier mult_bessel_inv(const TorusSpec& s);
Multiplier mult_cut(const TorusSpec& s, int N, Side side);
Multiplier compose(const Multiplier& a, const Multiplier& b);  // a after b

class ParaOperator {
 public:
  enum class Kind { lo, hi };  // lo: (pre f) < g ; hi: g < (pre f)
  explicit ParaOperator(const TorusSpec& s, const DyadicPartition& part = default_partition());

  int add_field(const Field& g);
  void add(Kind kind, const Multiplier& pre, int g, const Multiplier& post, cplx coef = 1.0);
  void set_outer(const Multiplier& m) { outer_ = m; }

  Field apply(const Field& f) const;
  Field adjoint(const Field& h) const;
  const TorusSpec& spec() const { return spec_; }
  std::size_t terms() const { return terms_.size(); }

 private:
  struct Term {
    Kind kind;
    std::string pre, post;
    int g;
    cplx coef;
  };
  TorusSpec spec_;
  const DyadicPartition* part_;
  std::vector<std::unique_ptr<BlockGrids>> g_;
  std::map<std::string, Multiplier> mult_;
  std::vector<Term> terms_;
  Multiplier outer_;
  std::vector<std::vector<double>> low_tab_;  // S_{j-1} weights, j = 0..j_max
};

}  // namespace atorus
