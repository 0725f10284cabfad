#include <algorithm>
#include <cmath>
#include <limits>

#include "readability/errors.hpp"
#include "readability/metrics_enhanced.hpp"

namespace readability::enhanced {

using geometry::Point;
using geometry::Segment;

namespace {

Point to_strip_frame(const Point& p, StripAxis axis) { return axis == StripAxis::Vertical ? p : Point{p.y, p.x}; }

// Smallest k with k * w >= x.
std::int64_t line_at_or_above(double x, double w) {
  auto k = static_cast<std::int64_t>(std::ceil(x / w));
  while (static_cast<double>(k - 1) * w >= x) --k;
  while (static_cast<double>(k) * w < x) ++k;
  return k;
}

// Largest k with k * w <= x.
std::int64_t line_at_or_below(double x, double w) {
  auto k = static_cast<std::int64_t>(std::floor(x / w));
  while (static_cast<double>(k + 1) * w <= x) ++k;
  while (static_cast<double>(k) * w > x) --k;
  return k;
}

// An edge in the strip frame with the range of strips it spans.
struct SpanningEdge {
  Segment seg;
  Edge edge;
  double theta;
  std::int64_t first;  // spans strips [first, last)
  std::int64_t last;
};

// Assignment of edges to the strips they span. Segments of a range of
// strips are generated one strip at a time from an active list, so memory
// stays O(|E|) however thin the strips are.
class StripPlan {
 public:
  StripPlan(const LayoutGraph& g, double width, StripAxis axis) : width_(width) {
    if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("strip width must be finite and positive");
    if (g.num_vertices() == 0) throw InputError("cannot build strips for an empty layout");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : g.vertices()) {
      const double x = to_strip_frame(v.position, axis).x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (!(hi > lo)) throw InputError("layout has zero extent along the strip axis");
    first_index_ = line_at_or_below(lo, width);
    num_strips_ = static_cast<std::size_t>(std::max<std::int64_t>(1, line_at_or_above(hi, width) - first_index_));

    spans_.reserve(g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const Segment raw = g.segment(e);
      const Segment seg{to_strip_frame(raw.a, axis), to_strip_frame(raw.b, axis)};
      const double x_lo = std::min(seg.a.x, seg.b.x);
      const double x_hi = std::max(seg.a.x, seg.b.x);
      if (x_lo == x_hi) continue;
      const std::int64_t first = line_at_or_above(x_lo, width);
      const std::int64_t last = line_at_or_below(x_hi, width);
      if (last <= first) continue;
      spans_.push_back({seg, g.edges()[e], geometry::axis_angle(seg), first, last});
    }
    std::stable_sort(spans_.begin(), spans_.end(),
                     [](const SpanningEdge& a, const SpanningEdge& b) { return a.first < b.first; });
  }

  std::int64_t first_index() const { return first_index_; }
  std::size_t num_strips() const { return num_strips_; }
  double width() const { return width_; }

  // Calls fn(strip, segments) for local strips [lo, hi).
  template <typename F>
  void sweep(std::size_t lo, std::size_t hi, F&& fn) const {
    if (lo >= hi) return;
    std::vector<const SpanningEdge*> active;
    std::vector<StripSegment> segments;
    const std::int64_t k_lo = first_index_ + static_cast<std::int64_t>(lo);
    std::size_t next = 0;
    for (; next < spans_.size() && spans_[next].first <= k_lo; ++next) {
      if (spans_[next].last > k_lo) active.push_back(&spans_[next]);
    }
    for (std::size_t s = lo; s < hi; ++s) {
      const std::int64_t k = first_index_ + static_cast<std::int64_t>(s);
      if (s > lo) {
        std::erase_if(active, [k](const SpanningEdge* e) { return e->last <= k; });
        for (; next < spans_.size() && spans_[next].first <= k; ++next) active.push_back(&spans_[next]);
      }
      const double left = static_cast<double>(k) * width_;
      const double right = static_cast<double>(k + 1) * width_;
      segments.clear();
      for (const SpanningEdge* e : active) {
        segments.push_back({e->edge, geometry::ordinate_at(e->seg, left), geometry::ordinate_at(e->seg, right), e->theta});
      }
      fn(s, std::span<const StripSegment>(segments));
    }
  }

 private:
  double width_;
  std::int64_t first_index_ = 0;
  std::size_t num_strips_ = 0;
  std::vector<SpanningEdge> spans_;
};

// Reusable buffers for the inversion sweep.
class InversionCounter {
 public:
  std::uint64_t count(std::span<const StripSegment> segments) {
    const std::size_t n = segments.size();
    // dense rank of r, equal values sharing a rank
    by_r_.resize(n);
    for (std::size_t i = 0; i < n; ++i) by_r_[i] = {segments[i].r, static_cast<std::uint32_t>(i)};
    std::sort(by_r_.begin(), by_r_.end());
    rank_of_.resize(n);
    std::uint32_t ranks = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 0 || by_r_[i].first != by_r_[i - 1].first) ++ranks;
      rank_of_[by_r_[i].second] = ranks;  // 1-based
    }
    by_l_.resize(n);
    for (std::size_t i = 0; i < n; ++i) by_l_[i] = {segments[i].l, rank_of_[i]};
    std::sort(by_l_.begin(), by_l_.end());
    fenwick_.assign(static_cast<std::size_t>(ranks) + 1, 0);

    std::uint64_t crossings = 0;
    std::uint64_t inserted = 0;
    for (std::size_t begin = 0; begin < n;) {
      std::size_t end = begin;
      while (end < n && by_l_[end].first == by_l_[begin].first) ++end;
      for (std::size_t i = begin; i < end; ++i) {
        // inserted r_j strictly greater than r_i
        crossings += inserted - prefix(by_l_[i].second);
      }
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t k = by_l_[i].second; k < fenwick_.size(); k += k & (~k + 1)) ++fenwick_[k];
        ++inserted;
      }
      begin = end;
    }
    return crossings;
  }

 private:
  std::uint64_t prefix(std::size_t k) const {
    std::uint64_t total = 0;
    for (; k > 0; k -= k & (~k + 1)) total += fenwick_[k];
    return total;
  }

  std::vector<std::pair<double, std::uint32_t>> by_r_;
  std::vector<std::pair<double, std::uint32_t>> by_l_;
  std::vector<std::uint32_t> rank_of_;
  std::vector<std::uint32_t> fenwick_;
};

// Strip ranges handed to workers; more chunks than workers evens out the
// denser middle strips.
template <typename F>
void for_strip_chunks(const StripPlan& plan, const dataflow::ExecConfig& exec, F&& per_chunk) {
  const std::size_t strips = plan.num_strips();
  const std::size_t chunks = std::clamp<std::size_t>(exec.target_partitions, 1, strips);
  dataflow::parallel_for(chunks, exec.workers, [&](std::size_t c) {
    per_chunk(c * strips / chunks, (c + 1) * strips / chunks);
  });
}

std::vector<CrossingDeviation> strip_deviations(const LayoutGraph& g, double width, double ideal_angle, StripAxis axis,
                                                const dataflow::ExecConfig& exec) {
  const StripPlan plan(g, width, axis);
  std::vector<CrossingDeviation> per_strip(plan.num_strips());
  for_strip_chunks(plan, exec, [&](std::size_t lo, std::size_t hi) {
    plan.sweep(lo, hi, [&](std::size_t s, std::span<const StripSegment> segs) {
      per_strip[s] = strip_crossing_deviation(segs, ideal_angle);
    });
  });
  return per_strip;
}

CrossingAngleResult crossing_angle_for_axis(const LayoutGraph& g, double width, double ideal_angle, StripAxis axis,
                                            const dataflow::ExecConfig& exec) {
  CrossingDeviation total;
  for (const auto& d : strip_deviations(g, width, ideal_angle, axis, exec)) total += d;
  CrossingAngleResult result;
  result.axis = axis;
  result.crossings = total.count;
  result.deviation_sum = total.deviation_sum;
  if (total.count > 0) result.value = 1.0 - (total.deviation_sum / ideal_angle) / static_cast<double>(total.count);
  return result;
}

}  // namespace

StripSet build_strips(const LayoutGraph& g, double width, StripAxis axis) {
  const StripPlan plan(g, width, axis);
  StripSet set;
  set.width = plan.width();
  set.first_index = plan.first_index();
  set.strips.resize(plan.num_strips());
  plan.sweep(0, plan.num_strips(), [&](std::size_t s, std::span<const StripSegment> segs) {
    set.strips[s].assign(segs.begin(), segs.end());
  });
  return set;
}

std::uint64_t count_strip_crossings(std::span<const StripSegment> segments) {
  InversionCounter counter;
  return counter.count(segments);
}

std::vector<std::pair<Edge, Edge>> strip_crossing_pairs(std::span<const StripSegment> segments) {
  std::vector<std::pair<Edge, Edge>> pairs;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      const auto& a = segments[i];
      const auto& b = segments[j];
      if ((b.l - a.l) * (b.r - a.r) < 0.0) pairs.emplace_back(std::min(a.edge, b.edge), std::max(a.edge, b.edge));
    }
  }
  return pairs;
}

std::vector<std::uint64_t> strip_crossing_counts(const LayoutGraph& g, double width, StripAxis axis,
                                                 const dataflow::ExecConfig& exec) {
  const StripPlan plan(g, width, axis);
  std::vector<std::uint64_t> per_strip(plan.num_strips(), 0);
  for_strip_chunks(plan, exec, [&](std::size_t lo, std::size_t hi) {
    InversionCounter counter;
    plan.sweep(lo, hi, [&](std::size_t s, std::span<const StripSegment> segs) { per_strip[s] = counter.count(segs); });
  });
  return per_strip;
}

std::uint64_t edge_crossing_enhanced(const LayoutGraph& g, double width, StripOrientation orientation,
                                     const dataflow::ExecConfig& exec) {
  if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("strip width must be finite and positive");
  if (g.num_edges() == 0) return 0;
  auto total = [&](StripAxis axis) {
    std::uint64_t sum = 0;
    for (auto c : strip_crossing_counts(g, width, axis, exec)) sum += c;
    return sum;
  };
  switch (orientation) {
    case StripOrientation::Vertical: return total(StripAxis::Vertical);
    case StripOrientation::Horizontal: return total(StripAxis::Horizontal);
    case StripOrientation::Both: return std::max(total(StripAxis::Vertical), total(StripAxis::Horizontal));
  }
  return 0;
}

CrossingAngleResult edge_crossing_angle_enhanced(const LayoutGraph& g, double width, double ideal_angle,
                                                 StripOrientation orientation, const dataflow::ExecConfig& exec) {
  if (!(ideal_angle > 0.0 && ideal_angle <= geometry::kPi / 2)) {
    throw ParameterError("ideal angle must lie in (0, pi/2]");
  }
  if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("strip width must be finite and positive");
  if (g.num_edges() == 0) return {};
  switch (orientation) {
    case StripOrientation::Vertical: return crossing_angle_for_axis(g, width, ideal_angle, StripAxis::Vertical, exec);
    case StripOrientation::Horizontal:
      return crossing_angle_for_axis(g, width, ideal_angle, StripAxis::Horizontal, exec);
    case StripOrientation::Both: {
      auto v = crossing_angle_for_axis(g, width, ideal_angle, StripAxis::Vertical, exec);
      auto h = crossing_angle_for_axis(g, width, ideal_angle, StripAxis::Horizontal, exec);
      return h.crossings > v.crossings ? h : v;
    }
  }
  return {};
}

}  // namespace readability::enhanced
