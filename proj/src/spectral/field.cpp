#include <algorithm>
#include <cmath>

#include "atorus/spectral.hpp"

namespace atorus {

Field::Field(const TorusSpec& s) : spec_(s), c_(s.size(), cplx(0.0, 0.0)) { s.validate(); }

Field Field::constant(const TorusSpec& s, cplx c) {
  Field f(s);
  f[lattice(s).zero] = c;
  f.reality = c.imag() == 0.0;
  return f;
}

Field Field::mode(const TorusSpec& s, const KVec& k, cplx c) {
  if (!s.contains(k)) throw SpecError("Field::mode: k outside lattice");
  Field f(s);
  f.set(k, c);
  return f;
}

cplx Field::at(const KVec& k) const {
  if (!spec_.contains(k)) return cplx(0.0, 0.0);
  return c_[spec_.index(k)];
}

void Field::set(const KVec& k, cplx v) {
  if (!spec_.contains(k)) throw SpecError("Field::set: k outside lattice");
  c_[spec_.index(k)] = v;
}

void require_same_spec(const Field& a, const Field& b, const char* where) {
  if (a.spec() != b.spec())
    throw SpecError(std::string(where) + ": spec mismatch (" + to_string(a.spec()) + " vs " +
                    to_string(b.spec()) + ")");
}

Field& Field::operator+=(const Field& o) {
  require_same_spec(*this, o, "Field::+=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  reality = reality && o.reality;
  zero_mode_excluded = zero_mode_excluded && o.zero_mode_excluded;
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same_spec(*this, o, "Field::-=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  reality = reality && o.reality;
  zero_mode_excluded = zero_mode_excluded && o.zero_mode_excluded;
  return *this;
}

Field& Field::operator*=(cplx a) {
  for (auto& v : c_) v *= a;
  if (a.imag() != 0.0) reality = false;
  return *this;
}

Field& Field::axpy(cplx a, const Field& x) {
  require_same_spec(*this, x, "Field::axpy");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += a * x.c_[i];
  reality = reality && x.reality && a.imag() == 0.0;
  zero_mode_excluded = zero_mode_excluded && x.zero_mode_excluded;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx a, Field b) { return b *= a; }
Field operator-(Field a) { return a *= -1.0; }

double Field::norm() const {
  double s = 0.0;
  for (const auto& v : c_) s += std::norm(v);
  return std::sqrt(s);
}

double Field::max_abs() const {
  double m = 0.0;
  for (const auto& v : c_) m = std::max(m, std::abs(v));
  return m;
}

cplx Field::inner(const Field& o) const {
  require_same_spec(*this, o, "Field::inner");
  cplx s = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i) s += std::conj(c_[i]) * o.c_[i];
  return s;
}

double Field::reality_defect() const {
  const Lattice& lat = lattice(spec_);
  double m = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i)
    m = std::max(m, std::abs(c_[lat.neg[i]] - std::conj(c_[i])));
  double s = max_abs();
  return s > 0 ? m / s : 0.0;
}

void Field::enforce_reality() {
  const Lattice& lat = lattice(spec_);
  std::vector<cplx> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i)
    out[i] = 0.5 * (c_[i] + std::conj(c_[lat.neg[i]]));
  c_ = std::move(out);
  reality = true;
}

Field Field::conj_field() const {
  const Lattice& lat = lattice(spec_);
  Field f(spec_);
  for (std::size_t i = 0; i < c_.size(); ++i) f.c_[i] = std::conj(c_[lat.neg[i]]);
  f.reality = reality;
  f.zero_mode_excluded = zero_mode_excluded;
  return f;
}

Field Field::real_part() const {
  Field f = *this;
  f.enforce_reality();
  f.zero_mode_excluded = zero_mode_excluded;
  return f;
}

void Field::check_invariants(double tol) const {
  if (reality && reality_defect() > tol)
    throw SpecError("Field: reality flag set but coefficients are not hermitian");
  if (zero_mode_excluded && c_[lattice(spec_).zero] != cplx(0.0, 0.0))
    throw SpecError("Field: zero_mode_excluded set but coefficient(0) != 0");
}

// ---- multipliers ----------------------------------------------------------

Field multiply_table(const Field& f, const std::vector<double>& table) {
  Field g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= table[i];
  return g;
}

Field laplacian(const Field& f) {
  const Lattice& lat = lattice(f.spec());
  Field g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= -kFourPi2 * lat.k2[i];
  return g;
}

Field bessel(const Field& f) {
  const Lattice& lat = lattice(f.spec());
  Field g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= 1.0 + kFourPi2 * lat.k2[i];
  return g;
}

Field bessel_inv(const Field& f) {
  const Lattice& lat = lattice(f.spec());
  Field g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] /= 1.0 + kFourPi2 * lat.k2[i];
  return g;
}

Field neg_laplacian_inv(const Field& f) {
  const Lattice& lat = lattice(f.spec());
  Field g = f;
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = lat.k2[i] > 0 ? g[i] / (kFourPi2 * lat.k2[i]) : cplx(0.0, 0.0);
  g.zero_mode_excluded = true;
  return g;
}

Field deriv(const Field& f, int axis) {
  if (axis < 0 || axis >= f.spec().dim) throw SpecError("deriv: axis out of range");
  const Lattice& lat = lattice(f.spec());
  Field g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= cplx(0.0, kTwoPi * lat.k[i][axis]);
  g.zero_mode_excluded = true;
  return g;
}

std::vector<Field> gradient(const Field& f) {
  std::vector<Field> out;
  for (int a = 0; a < f.spec().dim; ++a) out.push_back(deriv(f, a));
  return out;
}

Field divergence(const std::vector<Field>& v) {
  Field out(v.at(0).spec());
  for (std::size_t a = 0; a < v.size(); ++a) out += deriv(v[a], int(a));
  return out;
}

// ---- products -------------------------------------------------------------

Field product(const Field& f, const Field& g) {
  require_same_spec(f, g, "product");
  int n = f.spec().grid_n;
  Grid a = to_grid(f, n);
  Grid b = to_grid(g, n);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  Field out = from_grid(a, n, f.spec());
  out.reality = f.reality && g.reality;
  return out;
}

Field dot(const std::vector<Field>& a, const std::vector<Field>& b) {
  if (a.size() != b.size() || a.empty()) throw SpecError("dot: component count mismatch");
  int n = a[0].spec().grid_n;
  Grid acc(a[0].spec().grid_points(), cplx(0.0, 0.0));
  bool real = true;
  for (std::size_t c = 0; c < a.size(); ++c) {
    require_same_spec(a[c], b[c], "dot");
    Grid x = to_grid(a[c], n);
    Grid y = to_grid(b[c], n);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += x[i] * y[i];
    real = real && a[c].reality && b[c].reality;
  }
  Field out = from_grid(acc, n, a[0].spec());
  out.reality = real;
  return out;
}

}  // namespace atorus
