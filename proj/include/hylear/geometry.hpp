#ifndef HYLEAR_GEOMETRY_HPP_
#define HYLEAR_GEOMETRY_HPP_

#include <algorithm>
#include <array>
#include <cmath>

namespace hylear {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
};

// Normalizes an angle to (-pi, pi].
inline double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, (-pi, pi]

  Vec2 position() const { return {x, y}; }
  Vec2 direction() const { return {std::cos(heading), std::sin(heading)}; }
};

// Oriented rectangle given by center, half extents and heading.
struct Rect {
  Vec2 center;
  double half_length = 0.0;  // along heading
  double half_width = 0.0;   // lateral
  double heading = 0.0;

  std::array<Vec2, 4> corners() const {
    const Vec2 ax{std::cos(heading), std::sin(heading)};
    const Vec2 ay{-ax.y, ax.x};
    const Vec2 dl = ax * half_length;
    const Vec2 dw = ay * half_width;
    return {center + dl + dw, center + dl - dw, center - dl - dw, center - dl + dw};
  }

  // Point expressed in the rectangle frame.
  Vec2 to_local(const Vec2& p) const {
    const Vec2 d = p - center;
    const double c = std::cos(heading), s = std::sin(heading);
    return {d.x * c + d.y * s, -d.x * s + d.y * c};
  }

  bool contains(const Vec2& p) const {
    const Vec2 l = to_local(p);
    return std::abs(l.x) <= half_length && std::abs(l.y) <= half_width;
  }

  // Euclidean distance from the rectangle boundary/interior to a point
  // (0 if the point is inside).
  double distance_to(const Vec2& p) const {
    const Vec2 l = to_local(p);
    const double dx = std::max(std::abs(l.x) - half_length, 0.0);
    const double dy = std::max(std::abs(l.y) - half_width, 0.0);
    return std::hypot(dx, dy);
  }

  Rect inflated(double margin) const {
    return {center, half_length + margin, half_width + margin, heading};
  }
};

// Axis-aligned rectangle helper used by road layouts.
struct Aabb {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

  bool contains(const Vec2& p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
};

inline double segment_point_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

inline bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = (b - a).cross(c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
  };
  const auto on_seg = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
  };
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_seg(p1, p2, q1)) return true;
  if (o2 == 0 && on_seg(p1, p2, q2)) return true;
  if (o3 == 0 && on_seg(q1, q2, p1)) return true;
  if (o4 == 0 && on_seg(q1, q2, p2)) return true;
  return false;
}

inline bool segment_intersects_rect(const Vec2& a, const Vec2& b, const Rect& r) {
  if (r.contains(a) || r.contains(b)) return true;
  const auto c = r.corners();
  for (int i = 0; i < 4; ++i) {
    if (segments_intersect(a, b, c[i], c[(i + 1) % 4])) return true;
  }
  return false;
}

// Separating-axis test for two oriented rectangles.
inline bool rects_overlap(const Rect& a, const Rect& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const auto separated = [](const std::array<Vec2, 4>& pts_a, const std::array<Vec2, 4>& pts_b,
                            const Vec2& axis) {
    double a_min = 1e300, a_max = -1e300, b_min = 1e300, b_max = -1e300;
    for (const auto& p : pts_a) {
      const double v = p.dot(axis);
      a_min = std::min(a_min, v);
      a_max = std::max(a_max, v);
    }
    for (const auto& p : pts_b) {
      const double v = p.dot(axis);
      b_min = std::min(b_min, v);
      b_max = std::max(b_max, v);
    }
    return a_max < b_min || b_max < a_min;
  };
  const Vec2 axes[4] = {
      {std::cos(a.heading), std::sin(a.heading)},
      {-std::sin(a.heading), std::cos(a.heading)},
      {std::cos(b.heading), std::sin(b.heading)},
      {-std::sin(b.heading), std::cos(b.heading)},
  };
  for (const auto& ax : axes) {
    if (separated(ca, cb, ax)) return false;
  }
  return true;
}

}  // namespace hylear

#endif  // HYLEAR_GEOMETRY_HPP_
