#include <charconv>
#include <cmath>
#include <fstream>

#include "atorus/harness.hpp"

namespace atorus {

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::invalid_argument("CsvTable: row width differs from header");
  rows.push_back(std::move(row));
}

std::size_t CsvTable::col(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::out_of_range("CsvTable: no column " + name);
}

double CsvTable::num(std::size_t row, const std::string& name) const {
  const std::string& s = rows.at(row).at(col(name));
  if (s.empty()) return std::nan("");
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("CsvTable: not a number: " + s);
  return v;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

namespace {

void put(std::ostream& os, const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    os << s;
    return;
  }
  os << '"';
  for (char c : s) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

// one record; false at end of input
bool record(std::istream& is, std::vector<std::string>& out) {
  out.clear();
  if (is.peek() == std::char_traits<char>::eof()) return false;
  std::string cell;
  bool quoted = false;
  for (;;) {
    int c = is.get();
    if (c == std::char_traits<char>::eof()) {
      if (quoted) throw std::invalid_argument("csv: unterminated quote");
      out.push_back(cell);
      return true;
    }
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          cell += '"';
          is.get();
        } else {
          quoted = false;
        }
      } else {
        cell += char(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c == '\n') {
      out.push_back(cell);
      return true;
    } else if (c != '\r') {
      cell += char(c);
    }
  }
}

}  // namespace

void write_csv(std::ostream& os, const CsvTable& t) {
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      put(os, r[i]);
    }
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::vector<std::string> r;
  if (!record(is, t.header)) throw std::invalid_argument("csv: missing header");
  while (record(is, r)) {
    if (r.size() != t.header.size()) throw std::invalid_argument("csv: ragged row");
    t.rows.push_back(r);
  }
  return t;
}

void save_csv(const std::filesystem::path& p, const CsvTable& t) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  write_csv(os, t);
}

CsvTable load_csv(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  return read_csv(is);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw std::invalid_argument("loglog_slope: non-positive data");
    double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace atorus
