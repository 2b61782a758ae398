#include "hrtlab/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrtlab/errors.hpp"

namespace hrtlab {

SymplecticMap SymplecticMap::inverse() const {
  // adjugate of a det-1 matrix
  SymplecticMap inv;
  inv.linear = {{{linear[1][1], -linear[0][1]}, {-linear[1][0], linear[0][0]}}};
  inv.shift = {-(inv.linear[0][0] * shift[0] + inv.linear[0][1] * shift[1]),
               -(inv.linear[1][0] * shift[0] + inv.linear[1][1] * shift[1])};
  return inv;
}

Configuration validate(const std::vector<TFPoint>& points, double geom_tol) {
  if (points.empty()) throw InvalidSpec("configuration needs at least one point");
  if (!(geom_tol > 0.0)) throw InvalidSpec("geom_tol must be positive");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].a) || !std::isfinite(points[i].b))
      throw InvalidSpec("configuration points must be finite");
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (dist(points[i], points[j]) <= geom_tol)
        throw DuplicatePoint("duplicate time-frequency points at indices " +
                                 std::to_string(i) + " and " + std::to_string(j),
                             i, j);
  }
  return Configuration{points, geom_tol};
}

namespace {

struct Direction {
  double ux, uy;   // unit vector, angle in [0, pi)
  double angle;
};

Direction direction_between(const TFPoint& p, const TFPoint& q) {
  double ux = q.a - p.a, uy = q.b - p.b;
  const double n = std::hypot(ux, uy);
  ux /= n;
  uy /= n;
  if (uy < 0.0 || (uy == 0.0 && ux < 0.0)) {
    ux = -ux;
    uy = -uy;
  }
  double angle = std::atan2(uy, ux);
  if (angle >= kPi) angle -= kPi;
  return {ux, uy, angle};
}

// Signed offset of p along the normal of u.
double offset_of(const TFPoint& p, double ux, double uy) {
  return -uy * p.a + ux * p.b;
}

bool all_on_one_line(const Configuration& c) {
  const auto& pts = c.points;
  if (pts.size() <= 2) return true;
  // line through the first point and the point farthest from it
  std::size_t far = 1;
  for (std::size_t k = 2; k < pts.size(); ++k)
    if (dist(pts[0], pts[k]) > dist(pts[0], pts[far])) far = k;
  const Direction d = direction_between(pts[0], pts[far]);
  const double o0 = offset_of(pts[0], d.ux, d.uy);
  for (const TFPoint& p : pts)
    if (std::abs(offset_of(p, d.ux, d.uy) - o0) > c.geom_tol) return false;
  return true;
}

}  // namespace

Classification classify(const Configuration& c) {
  const auto& pts = c.points;
  Classification out;

  if (all_on_one_line(c)) {
    out.kind = ConfigKind::Collinear;
    if (pts.size() >= 2) {
      std::size_t far = 1;
      for (std::size_t k = 2; k < pts.size(); ++k)
        if (dist(pts[0], pts[k]) > dist(pts[0], pts[far])) far = k;
      const Direction d = direction_between(pts[0], pts[far]);
      out.direction_angle = d.angle;
      out.offset1 = offset_of(pts[0], d.ux, d.uy);
    }
    return out;
  }

  // Search all pairwise directions for a two-parallel-line cover.
  // Tie-break: maximal m, then smallest direction angle.
  bool found = false;
  Classification best;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Direction d = direction_between(pts[i], pts[j]);
      std::vector<std::size_t> c1, c2;
      double o1 = 0.0, o2 = 0.0;
      bool ok = true;
      for (std::size_t k = 0; k < pts.size() && ok; ++k) {
        const double o = offset_of(pts[k], d.ux, d.uy);
        if (!c1.empty() || !c2.empty()) {
          if (!c1.empty() && std::abs(o - o1) <= c.geom_tol) {
            c1.push_back(k);
          } else if (!c2.empty() && std::abs(o - o2) <= c.geom_tol) {
            c2.push_back(k);
          } else if (c2.empty()) {
            o2 = o;
            c2.push_back(k);
          } else {
            ok = false;
          }
        } else {
          o1 = o;
          c1.push_back(k);
        }
      }
      if (!ok || c2.empty()) continue;
      Classification cand;
      cand.kind = ConfigKind::NMConfig;
      if (c1.size() <= c2.size()) {
        cand.line1 = c1;
        cand.line2 = c2;
        cand.offset1 = o1;
        cand.offset2 = o2;
      } else {
        cand.line1 = c2;
        cand.line2 = c1;
        cand.offset1 = o2;
        cand.offset2 = o1;
      }
      cand.n = static_cast<int>(cand.line1.size());
      cand.m = static_cast<int>(cand.line2.size());
      cand.direction_angle = d.angle;
      if (!found || cand.m > best.m ||
          (cand.m == best.m && cand.direction_angle < best.direction_angle - 1e-15)) {
        best = cand;
        found = true;
      }
    }
  }
  if (found) return best;
  return out;  // General
}

Configuration apply_map(const SymplecticMap& m, const Configuration& c) {
  Configuration out;
  out.geom_tol = c.geom_tol;
  out.points.reserve(c.points.size());
  for (const TFPoint& p : c.points) out.points.push_back(m(p));
  return out;
}

std::pair<SymplecticMap, Configuration> normalize_three(const Configuration& c) {
  if (c.points.size() != 3)
    throw InvalidSpec("normalize_three needs exactly 3 points");
  const TFPoint p1 = c.points[0], p2 = c.points[1];
  const double v1 = p2.a - p1.a, v2 = p2.b - p1.b;
  const double vsq = v1 * v1 + v2 * v2;
  if (vsq <= c.geom_tol * c.geom_tol)
    throw DegenerateConfig("first two points coincide");
  // rows (v2, -v1) and (v1, v2)/|v|^2; det = 1
  SymplecticMap m;
  m.linear = {{{v2, -v1}, {v1 / vsq, v2 / vsq}}};
  m.shift = {-(m.linear[0][0] * p1.a + m.linear[0][1] * p1.b),
             -(m.linear[1][0] * p1.a + m.linear[1][1] * p1.b)};
  return {m, apply_map(m, c)};
}

std::pair<SymplecticMap, Configuration> normalize_1n(const Configuration& c) {
  const Classification cls = classify(c);
  if (cls.kind != ConfigKind::NMConfig || cls.n != 1)
    throw NotOneN("configuration is not a (1,n) configuration");

  const std::size_t off_idx = cls.line1.front();
  const auto& line = cls.line2;
  const TFPoint q = c.points[off_idx];
  const TFPoint anchor = c.points[line[0]];

  // direction of the n-point line from its first two points
  const TFPoint second = c.points[line[1]];
  const double ux = second.a - anchor.a, uy = second.b - anchor.b;
  const double wx = q.a - anchor.a, wy = q.b - anchor.b;
  const double D = ux * wy - uy * wx;  // det[u, q - p*]

  // linear part L = [[D, 0], [0, 1]] * [u, q-p*]^{-1}
  const double inv00 = wy / D, inv01 = -wx / D;
  const double inv10 = -uy / D, inv11 = ux / D;
  SymplecticMap m;
  m.linear = {{{D * inv00, D * inv01}, {inv10, inv11}}};
  m.shift = {-(m.linear[0][0] * anchor.a + m.linear[0][1] * anchor.b),
             -(m.linear[1][0] * anchor.a + m.linear[1][1] * anchor.b)};
  return {m, apply_map(m, c)};
}

}  // namespace hrtlab
