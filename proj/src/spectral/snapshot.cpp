#include <stdexcept>
#include <utility>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "atorus/spectral.hpp"

namespace atorus {

namespace {

constexpr char kMagic[8] = {'A', 'T', 'F', 'L', 'D', '0', '0', '1'};

template <typename T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <typename T>
void put(std::ostream& os, T v) {
  v = to_le(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("snapshot: truncated binary stream");
  return to_le(v);
}

std::string expect_key(std::istream& is, const char* key) {
  std::string k;
  is >> k;
  if (k != key) throw std::runtime_error(std::string("snapshot: expected key '") + key + "'");
  return k;
}

}  // namespace

void write_snapshot_text(std::ostream& os, const Field& f) {
  const TorusSpec& s = f.spec();
  os << "atorus-field 1\n";
  os << "dim " << s.dim << "\nK " << s.K << "\ngrid_n " << s.grid_n << "\n";
  os << "reality " << int(f.reality) << "\nzero_mode_excluded " << int(f.zero_mode_excluded) << "\n";
  os << "coeffs " << f.size() << "\n";
  os << std::setprecision(17);
  const Lattice& lat = lattice(s);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (int a = 0; a < s.dim; ++a) os << lat.k[i][a] << ' ';
    os << f[i].real() << ' ' << f[i].imag() << '\n';
  }
}

Field read_snapshot_text(std::istream& is) {
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "atorus-field" || version != 1) throw std::runtime_error("snapshot: bad text header");
  TorusSpec s;
  int reality = 0, zme = 0;
  std::size_t count = 0;
  expect_key(is, "dim");
  is >> s.dim;
  expect_key(is, "K");
  is >> s.K;
  expect_key(is, "grid_n");
  is >> s.grid_n;
  expect_key(is, "reality");
  is >> reality;
  expect_key(is, "zero_mode_excluded");
  is >> zme;
  expect_key(is, "coeffs");
  is >> count;
  s.validate();
  if (count != s.size()) throw std::runtime_error("snapshot: coefficient count mismatch");
  Field f(s);
  for (std::size_t i = 0; i < count; ++i) {
    KVec k{0, 0, 0};
    for (int a = 0; a < s.dim; ++a) is >> k[a];
    double re, im;
    is >> re >> im;
    if (!is) throw std::runtime_error("snapshot: truncated text stream");
    if (s.index(k) != i) throw std::runtime_error("snapshot: coefficients not in lexicographic order");
    f[i] = cplx(re, im);
  }
  f.reality = reality != 0;
  f.zero_mode_excluded = zme != 0;
  return f;
}

void write_snapshot_binary(std::ostream& os, const Field& f) {
  const TorusSpec& s = f.spec();
  os.write(kMagic, sizeof(kMagic));
  put<int32_t>(os, s.dim);
  put<int32_t>(os, s.K);
  put<int32_t>(os, s.grid_n);
  put<uint8_t>(os, f.reality ? 1 : 0);
  put<uint8_t>(os, f.zero_mode_excluded ? 1 : 0);
  put<uint64_t>(os, f.size());
  const Lattice& lat = lattice(s);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (int a = 0; a < s.dim; ++a) put<int32_t>(os, lat.k[i][a]);
    put<double>(os, f[i].real());
    put<double>(os, f[i].imag());
  }
}

Field read_snapshot_binary(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("snapshot: bad binary magic");
  TorusSpec s;
  s.dim = get<int32_t>(is);
  s.K = get<int32_t>(is);
  s.grid_n = get<int32_t>(is);
  bool reality = get<uint8_t>(is) != 0;
  bool zme = get<uint8_t>(is) != 0;
  uint64_t count = get<uint64_t>(is);
  s.validate();
  if (count != s.size()) throw std::runtime_error("snapshot: coefficient count mismatch");
  Field f(s);
  for (std::size_t i = 0; i < count; ++i) {
    KVec k{0, 0, 0};
    for (int a = 0; a < s.dim; ++a) k[a] = get<int32_t>(is);
    double re = get<double>(is);
    double im = get<double>(is);
    if (s.index(k) != i) throw std::runtime_error("snapshot: coefficients not in lexicographic order");
    f[i] = cplx(re, im);
  }
  f.reality = reality;
  f.zero_mode_excluded = zme;
  return f;
}

void save_snapshot(const std::string& path, const Field& f, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path);
  if (binary)
    write_snapshot_binary(os, f);
  else
    write_snapshot_text(os, f);
}

Field load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path);
  char head[8] = {};
  is.read(head, 8);
  is.clear();
  is.seekg(0);
  if (std::memcmp(head, kMagic, 8) == 0) return read_snapshot_binary(is);
  return read_snapshot_text(is);
}

}  // namespace atorus
