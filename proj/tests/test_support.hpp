#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "readability/geometry.hpp"
#include "readability/layout_graph.hpp"

namespace testing_support {

using readability::Edge;
using readability::LayoutGraph;
using readability::Vertex;
using readability::VertexId;
using readability::geometry::Point;
using readability::geometry::Segment;

inline bool near_rel(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Small self-contained generator so test inputs do not depend on the
// library's own generators.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  Point point(double extent) { return {real(0.0, extent), real(0.0, extent)}; }

  // Random simple graph on 0..n-1 with up to m edges, uniform positions.
  LayoutGraph graph(std::size_t n, std::size_t m, double extent) {
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back({static_cast<VertexId>(i), point(extent)});
    std::vector<Edge> es;
    if (n >= 2) {
      for (std::size_t k = 0; k < m; ++k) {
        const auto a = integer(0, static_cast<std::int64_t>(n) - 1);
        const auto b = integer(0, static_cast<std::int64_t>(n) - 1);
        if (a != b) es.push_back({a, b});
      }
    }
    return LayoutGraph(std::move(vs), readability::normalize_edges(es));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Segment intersection by solving a + t(b - a) = c + s(d - c). Only
// meaningful away from degeneracy; returns nullopt for near-parallel input.
inline std::optional<bool> parametric_intersect(const Segment& p, const Segment& q, double margin = 1e-9) {
  const double rx = p.b.x - p.a.x, ry = p.b.y - p.a.y;
  const double sx = q.b.x - q.a.x, sy = q.b.y - q.a.y;
  const double denom = rx * sy - ry * sx;
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const double qpx = q.a.x - p.a.x, qpy = q.a.y - p.a.y;
  const double t = (qpx * sy - qpy * sx) / denom;
  const double u = (qpx * ry - qpy * rx) / denom;
  auto near_edge = [margin](double v) { return std::abs(v) < margin || std::abs(v - 1.0) < margin; };
  if (near_edge(t) || near_edge(u)) return std::nullopt;
  return t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0;
}

// Acute angle between two segments from their direction vectors.
inline double angle_between(const Segment& p, const Segment& q) {
  const double ax = p.b.x - p.a.x, ay = p.b.y - p.a.y;
  const double bx = q.b.x - q.a.x, by = q.b.y - q.a.y;
  const double c = std::abs(ax * bx + ay * by) / (std::hypot(ax, ay) * std::hypot(bx, by));
  return std::acos(std::min(1.0, c));
}

}  // namespace testing_support
