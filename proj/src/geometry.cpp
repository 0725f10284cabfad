#include "readability/geometry.hpp"

#include <algorithm>
#include <utility>

#include "readability/errors.hpp"

namespace readability::geometry {

Orientation ccw(const Point& a, const Point& b, const Point& c) {
  const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (cross > 0.0) return Orientation::CounterClockwise;
  if (cross < 0.0) return Orientation::Clockwise;
  return Orientation::Collinear;
}

bool properly_intersect(const Segment& s1, const Segment& s2) {
  const int a = static_cast<int>(ccw(s1.a, s1.b, s2.a)) * static_cast<int>(ccw(s1.a, s1.b, s2.b));
  if (a > 0) return false;
  const int b = static_cast<int>(ccw(s2.a, s2.b, s1.a)) * static_cast<int>(ccw(s2.a, s2.b, s1.b));
  return b <= 0;
}

double incident_angle(const Point& v, const Point& u) {
  if (v == u) throw InputError("incident_angle: zero-length edge");
  double angle = std::atan2(u.y - v.y, u.x - v.x);
  if (angle < 0.0) angle += kTwoPi;
  // atan2 of a tiny negative y can round up to exactly 2pi after the shift.
  if (angle >= kTwoPi) angle = 0.0;
  return angle;
}

double axis_angle(const Segment& s) {
  if (s.a == s.b) throw InputError("axis_angle: degenerate segment");
  double dx = s.b.x - s.a.x;
  double dy = s.b.y - s.a.y;
  // Point the direction into the upper half-plane so both endpoint orders
  // evaluate the same atan2 and land in [0, pi) without wrapping.
  if (dy < 0.0 || (dy == 0.0 && dx < 0.0)) {
    dx = -dx;
    dy = -dy;
  }
  return std::atan2(dy, dx) + 0.0;
}

double crossing_angle(double theta1, double theta2) {
  const double d = std::abs(theta1 - theta2);
  return std::min(d, kPi - d);
}

double ordinate_at(const Segment& s, double x) {
  Point lo = s.a;
  Point hi = s.b;
  if (hi.x < lo.x || (hi.x == lo.x && hi.y < lo.y)) std::swap(lo, hi);
  if (x == lo.x) return lo.y;
  if (x == hi.x) return hi.y;
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.y + t * (hi.y - lo.y);
}

std::optional<StripOrdinates> clip_to_strip(const Segment& s, double x_left, double x_right) {
  const double x_min = std::min(s.a.x, s.b.x);
  const double x_max = std::max(s.a.x, s.b.x);
  if (x_min == x_max) return std::nullopt;
  if (x_min > x_left || x_max < x_right) return std::nullopt;
  return StripOrdinates{ordinate_at(s, x_left), ordinate_at(s, x_right)};
}

}  // namespace readability::geometry
