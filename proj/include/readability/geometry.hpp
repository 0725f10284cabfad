#pragma once

#include <cmath>
#include <numbers>
#include <optional>

namespace readability::geometry {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Segment {
  Point a;
  Point b;
};

enum class Orientation : int { Clockwise = -1, Collinear = 0, CounterClockwise = 1 };

inline bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Sign of (b - a) x (c - a). No epsilon: only an exactly-zero product is collinear.
Orientation ccw(const Point& a, const Point& b, const Point& c);

// The four-orientation crossing predicate. Endpoint contact and collinear
// configurations satisfy it (a zero factor makes the product <= 0).
bool properly_intersect(const Segment& s1, const Segment& s2);

// Angle of u - v from the positive x-axis, in [0, 2pi). Throws InputError if v == u.
double incident_angle(const Point& v, const Point& u);

// Undirected angle of the supporting line, in [0, pi).
double axis_angle(const Segment& s);

// Acute angle between two lines with axis angles in [0, pi). Result in [0, pi/2].
double crossing_angle(double theta1, double theta2);

struct StripOrdinates {
  double l;  // y where the segment meets x_left
  double r;  // y where the segment meets x_right
};

// y-ordinate of the segment's supporting line at x. Endpoints are returned
// exactly. Requires a non-vertical segment.
double ordinate_at(const Segment& s, double x);

// Both boundary ordinates if the segment spans [x_left, x_right]
// (min x <= x_left and max x >= x_right), otherwise nullopt.
std::optional<StripOrdinates> clip_to_strip(const Segment& s, double x_left, double x_right);

// Boundary discs of radius r overlap: squared center distance < (2r)^2.
inline bool discs_overlap(const Point& p, const Point& q, double r) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double d = 2.0 * r;
  return dx * dx + dy * dy < d * d;
}

inline double distance(const Point& p, const Point& q) { return std::hypot(p.x - q.x, p.y - q.y); }

}  // namespace readability::geometry
