#include <algorithm>
#include <cmath>

#include "readability/errors.hpp"
#include "readability/metrics_exact.hpp"

namespace readability {

using geometry::kTwoPi;

double min_gap(std::vector<double> angles) {
  if (angles.empty()) throw ParameterError("min_gap: no angles");
  std::sort(angles.begin(), angles.end());
  double gap = kTwoPi - angles.back() + angles.front();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::min(gap, angles[i] - angles[i - 1]);
  return gap;
}

namespace oracle {

std::uint64_t node_occlusion(const LayoutGraph& g, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ParameterError("radius must be finite and positive");
  const auto vs = g.vertices();
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (geometry::discs_overlap(vs[i].position, vs[j].position, radius)) ++count;
    }
  }
  return count;
}

MetricValue minimum_angle(const LayoutGraph& g) {
  if (g.num_edges() == 0) return {1.0, "minimum angle undefined without edges; reporting 1"};
  std::vector<std::vector<double>> incident(g.num_vertices());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.edge_endpoints(e);
    const auto& pa = g.vertices()[a].position;
    const auto& pb = g.vertices()[b].position;
    incident[a].push_back(geometry::incident_angle(pa, pb));
    incident[b].push_back(geometry::incident_angle(pb, pa));
  }
  double deviation = 0.0;
  std::size_t counted = 0;
  for (auto& angles : incident) {
    if (angles.empty()) continue;
    const double ideal = kTwoPi / static_cast<double>(angles.size());
    deviation += (ideal - min_gap(std::move(angles))) / ideal;
    ++counted;
  }
  return {1.0 - deviation / static_cast<double>(counted), {}};
}

MetricValue edge_length_variation(const LayoutGraph& g) {
  const std::size_t n = g.num_edges();
  if (n <= 1) return {0.0, "edge length variation needs at least two edges; reporting 0"};
  std::vector<double> lengths(n);
  double total = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    const auto s = g.segment(e);
    lengths[e] = geometry::distance(s.a, s.b);
    total += lengths[e];
  }
  const double count = static_cast<double>(n);
  const double mean = total / count;
  double acc = 0.0;
  for (double l : lengths) acc += (l - mean) * (l - mean) / (count * mean * mean);
  return {std::sqrt(acc) / std::sqrt(count - 1.0), {}};
}

namespace {

bool share_vertex(const Edge& a, const Edge& b) { return a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v; }

// Calls fn(i, j) for every crossing pair i < j of non-adjacent edges.
template <typename F>
void for_each_crossing(const LayoutGraph& g, F&& fn) {
  const auto edges = g.edges();
  std::vector<geometry::Segment> segs(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) segs[e] = g.segment(e);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (share_vertex(edges[i], edges[j])) continue;
      if (geometry::properly_intersect(segs[i], segs[j])) fn(i, j);
    }
  }
}

}  // namespace

std::uint64_t edge_crossing(const LayoutGraph& g) {
  std::uint64_t count = 0;
  for_each_crossing(g, [&](std::size_t, std::size_t) { ++count; });
  return count;
}

double edge_crossing_angle(const LayoutGraph& g, double ideal_angle) {
  if (!(ideal_angle > 0.0 && ideal_angle <= geometry::kPi / 2)) {
    throw ParameterError("ideal angle must lie in (0, pi/2]");
  }
  std::vector<double> theta(g.num_edges());
  for (std::size_t e = 0; e < theta.size(); ++e) theta[e] = geometry::axis_angle(g.segment(e));
  std::uint64_t count = 0;
  double deviation = 0.0;
  for_each_crossing(g, [&](std::size_t i, std::size_t j) {
    ++count;
    deviation += std::abs(ideal_angle - geometry::crossing_angle(theta[i], theta[j])) / ideal_angle;
  });
  if (count == 0) return 1.0;
  return 1.0 - deviation / static_cast<double>(count);
}

}  // namespace oracle
}  // namespace readability
