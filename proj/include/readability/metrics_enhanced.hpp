#pragma once

// Grid and strip based evaluation: exact node occlusion through a 2r x 2r
// cell grid, and approximate edge crossing / crossing angle through vertical
// (or horizontal) strips swept by left-boundary ordinate.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "readability/dataflow.hpp"
#include "readability/layout_graph.hpp"
#include "readability/report.hpp"

namespace readability::enhanced {

// ---------------------------------------------------------------------------
// Node occlusion

struct GridCellKey {
  std::int64_t ix = 0;
  std::int64_t iy = 0;

  friend bool operator==(const GridCellKey&, const GridCellKey&) = default;
  friend auto operator<=>(const GridCellKey&, const GridCellKey&) = default;
};

// Cells of side 2r (anchored at the origin) that the disc of radius r
// around p overlaps. Borderline cells are included.
std::vector<GridCellKey> overlapped_cells(const geometry::Point& p, double radius);

// Exact node occlusion: vertices are mapped to every cell their disc
// overlaps, grouped by cell, compared pairwise within each cell, and the
// reported pairs de-duplicated.
std::uint64_t node_occlusion_grid(const LayoutGraph& g, double radius, const dataflow::ExecConfig& exec);

// ---------------------------------------------------------------------------
// Strips

enum class StripAxis { Vertical, Horizontal };

// An edge clipped to one strip. For horizontal strips x and y are swapped
// before clipping, so l / r are x-ordinates at the lower / upper boundary.
struct StripSegment {
  Edge edge;
  double l = 0.0;      // ordinate at the left strip boundary
  double r = 0.0;      // ordinate at the right strip boundary
  double theta = 0.0;  // axis angle in [0, pi), measured in the strip frame
};

// Strips of width `width` between grid lines k * width. strips[s] holds the
// segments of grid strip first_index + s.
struct StripSet {
  double width = 0.0;
  std::int64_t first_index = 0;
  std::vector<std::vector<StripSegment>> strips;

  double left(std::size_t s) const { return static_cast<double>(first_index + static_cast<std::int64_t>(s)) * width; }
  double right(std::size_t s) const { return left(s + 1); }
};

// Every strip overlapping the layout's extent along the axis, each holding
// one segment per edge that spans it. Throws ParameterError for a
// non-positive width and InputError when the layout has zero extent.
StripSet build_strips(const LayoutGraph& g, double width, StripAxis axis);

// Pairs with (l_j - l_i)(r_j - r_i) < 0, counted by sweeping in l order
// and querying previously inserted r values strictly above r_i.
std::uint64_t count_strip_crossings(std::span<const StripSegment> segments);

// The pairs count_strip_crossings counts, as normalized edge pairs (first <
// second). O(n^2); meant for checking small instances.
std::vector<std::pair<Edge, Edge>> strip_crossing_pairs(std::span<const StripSegment> segments);

// Sum of per-strip crossing counts. Strips are processed as independent
// tasks. Both = max of the vertical and horizontal counts.
std::uint64_t edge_crossing_enhanced(const LayoutGraph& g, double width, StripOrientation orientation,
                                     const dataflow::ExecConfig& exec);

// Per-strip crossing counts of one axis, in strip order (debug / analysis).
std::vector<std::uint64_t> strip_crossing_counts(const LayoutGraph& g, double width, StripAxis axis,
                                                 const dataflow::ExecConfig& exec);

// ---------------------------------------------------------------------------
// Crossing angle

struct CountSum {
  std::uint64_t count = 0;
  double sum = 0.0;

  CountSum& operator+=(const CountSum& o) {
    count += o.count;
    sum += o.sum;
    return *this;
  }
  friend bool operator==(const CountSum&, const CountSum&) = default;
};

struct AngleOrdinate {
  double theta = 0.0;  // [0, pi)
  double r = 0.0;
};

// Count and angle-sum index over (angle, ordinate) entries. The candidate
// entries are fixed at construction; insert() activates them one at a time.
// A query returns, over activated entries with theta in [lo, hi) and
// r > r_min, their number and the sum of their angles.
//
// Realized as a Fenwick tree over descending distinct-r rank whose nodes keep
// the angles routed through them in sorted order with inner Fenwick arrays,
// so insert and query are O(log^2 n).
class RangeStructure2D {
 public:
  RangeStructure2D() = default;
  explicit RangeStructure2D(std::span<const AngleOrdinate> entries);

  void insert(std::size_t entry);

  CountSum query(double theta_lo, double theta_hi, double r_min) const;

  // out[k] = query(cuts[k], cuts[k + 1], r_min) for ascending cuts.
  void query_partition(std::span<const double> cuts, double r_min, std::span<CountSum> out) const;

  std::size_t inserted() const { return inserted_; }
  std::size_t capacity() const { return entries_.size(); }

 private:
  struct Node {
    std::vector<double> thetas;  // sorted
    std::vector<CountSum> fenwick;
    CountSum total;
  };

  std::size_t rank_above(double r_min) const;

  std::vector<AngleOrdinate> entries_;
  std::vector<double> r_desc_;  // distinct r, descending
  std::vector<Node> nodes_;     // 1-based Fenwick over r_desc_ positions
  // Per entry, its first node and its slot in every node on its update path.
  std::vector<std::uint32_t> first_node_;
  std::vector<std::uint32_t> slot_offset_;
  std::vector<std::uint32_t> slots_;
  std::size_t inserted_ = 0;
};

// Relative angle intervals around theta_i (ideal angle t):
//   LIL [0, t)        LIG [t, pi/2)        LOG [pi/2, pi - t)   LOL [pi - t, pi)
//   RIL [-t, 0)       RIG [-pi/2, -t)      ROG [-pi + t, -pi/2) ROL [-pi, -pi + t)
enum class AngleCategory { LIL, LIG, LOG, LOL, RIL, RIG, ROG, ROL };

inline constexpr std::array<AngleCategory, 8> kAngleCategories = {
    AngleCategory::LIL, AngleCategory::LIG, AngleCategory::LOG, AngleCategory::LOL,
    AngleCategory::RIL, AngleCategory::RIG, AngleCategory::ROG, AngleCategory::ROL};

std::string_view category_name(AngleCategory c);

// [lo, hi) offsets of a category relative to theta_i.
std::pair<double, double> category_offsets(AngleCategory c, double ideal_angle);

// Category containing theta_j, by its offset theta_j - theta_i in [-pi, pi).
AngleCategory categorize(double theta_i, double theta_j, double ideal_angle);

struct AngleCategoryStats {
  std::array<CountSum, 8> by_category{};

  const CountSum& operator[](AngleCategory c) const { return by_category[static_cast<std::size_t>(c)]; }
  CountSum& operator[](AngleCategory c) { return by_category[static_cast<std::size_t>(c)]; }
};

// Count and angle-sum per category over activated entries with r > r_i.
// Category intervals are intersected with [0, pi), where stored angles live.
AngleCategoryStats category_stats(const RangeStructure2D& index, double theta_i, double r_i, double ideal_angle);

struct CrossingDeviation {
  std::uint64_t count = 0;
  double deviation_sum = 0.0;  // sum of |ideal - crossing angle|, not yet divided by ideal

  CrossingDeviation& operator+=(const CrossingDeviation& o) {
    count += o.count;
    deviation_sum += o.deviation_sum;
    return *this;
  }
};

// Sum over the categorized partners of |ideal - crossing_angle(theta_i,
// theta_j)|, evaluated from category counts and angle sums alone.
CrossingDeviation deviation_from_categories(const AngleCategoryStats& stats, double theta_i, double ideal_angle);

// Sweep of one strip with a RangeStructure2D.
CrossingDeviation strip_crossing_deviation(std::span<const StripSegment> segments, double ideal_angle);

struct CrossingAngleResult {
  std::uint64_t crossings = 0;
  double deviation_sum = 0.0;
  double value = 1.0;  // E_ca; 1 when no crossings were found
  StripAxis axis = StripAxis::Vertical;
};

// Both = the axis whose sweep found more crossings (vertical on ties).
CrossingAngleResult edge_crossing_angle_enhanced(const LayoutGraph& g, double width, double ideal_angle,
                                                 StripOrientation orientation, const dataflow::ExecConfig& exec);

}  // namespace readability::enhanced

namespace readability {

// nc / ec / eca through the grid and strip algorithms. ma and ml have no
// grid variant and come from the dataflow path.
ReadabilityReport evaluate_enhanced(const LayoutGraph& g, const MetricParams& params,
                                    const dataflow::ExecConfig& exec, std::span<const Metric> metrics = kAllMetrics);

}  // namespace readability
