#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "atorus/noise.hpp"

namespace atorus {

namespace {

// |k|_inf range that can carry nonzero m(eps k) inside the cube of side K
int reach(double eps, const Mollifier& m, int K) {
  if (std::isinf(m.support)) return K;
  double r = m.support / eps;
  return std::min<int>(K, static_cast<int>(std::floor(r)));
}

struct Point {
  double x, y, z, w;  // k and |m(eps k)|^2
};

std::vector<Point> support_points_3d(double eps, const Mollifier& m, int K) {
  int R = reach(eps, m, K);
  std::vector<Point> pts;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b)
      for (int c = -R; c <= R; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        double r = std::sqrt(double(a) * a + double(b) * b + double(c) * c);
        double mv = m(eps * r);
        if (mv == 0.0) continue;
        pts.push_back({double(a), double(b), double(c), mv * mv});
      }
  return pts;
}

}  // namespace

double renorm_const_2d(double eps, const Mollifier& m, int K, bool* truncated) {
  if (!(eps > 0.0)) throw std::invalid_argument("renorm_const_2d: eps must be > 0");
  if (K > 1 << 14) throw std::overflow_error("renorm_const_2d: K too large");
  if (truncated) *truncated = mollifier_truncated(eps, m, K);
  int R = reach(eps, m, K);
  double s = 0.0;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b) {
      double k2 = double(a) * a + double(b) * b;
      double mv = m(eps * std::sqrt(k2));
      s += mv * mv / (1.0 + kFourPi2 * k2);
    }
  return s;
}

double renorm_c1_3d(double eps, const Mollifier& m, int K, bool* truncated) {
  if (!(eps > 0.0)) throw std::invalid_argument("renorm_c1_3d: eps must be > 0");
  if (K > 1024) throw std::overflow_error("renorm_c1_3d: K too large");
  if (truncated) *truncated = mollifier_truncated(eps, m, K);
  int R = reach(eps, m, K);
  double s = 0.0;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b)
      for (int c = -R; c <= R; ++c) {
        double k2 = double(a) * a + double(b) * b + double(c) * c;
        if (k2 == 0.0) continue;
        double mv = m(eps * std::sqrt(k2));
        s += mv * mv / (kFourPi2 * k2);
      }
  return s;
}

double renorm_c2_3d(double eps, const Mollifier& m, int K, C2Mode mode) {
  if (!(eps > 0.0)) throw std::invalid_argument("renorm_c2_3d: eps must be > 0");
  std::vector<Point> pts = support_points_3d(eps, m, K);
  double pairs = double(pts.size()) * double(pts.size());
  if (pairs > 4e10) throw std::overflow_error("renorm_c2_3d: pair count too large for direct summation");
  double s = 0.0;
  for (const Point& p : pts) {
    double k1sq = p.x * p.x + p.y * p.y + p.z * p.z;
    double pre = p.w / (k1sq * k1sq);
    double inner = 0.0;
    for (const Point& q : pts) {
      double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
      double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 == 0.0) continue;
      double dotv = p.x * q.x + p.y * q.y + p.z * q.z;
      if (mode == C2Mode::absolute) dotv = std::abs(dotv);
      double k2sq = q.x * q.x + q.y * q.y + q.z * q.z;
      inner += q.w * dotv / (d2 * k2sq);
    }
    s += pre * inner;
  }
  return s / std::pow(kTwoPi, 6);
}

Renorm3D renorm_const_3d(double eps, const Mollifier& m, int K, C2Mode mode) {
  Renorm3D r;
  r.c1 = renorm_c1_3d(eps, m, K, &r.truncated);
  r.c2 = renorm_c2_3d(eps, m, K, mode);
  return r;
}

}  // namespace atorus
