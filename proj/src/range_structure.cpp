#include <algorithm>
#include <numeric>

#include "readability/metrics_enhanced.hpp"

namespace readability::enhanced {

using geometry::kPi;

RangeStructure2D::RangeStructure2D(std::span<const AngleOrdinate> entries) : entries_(entries.begin(), entries.end()) {
  r_desc_.reserve(entries_.size());
  for (const auto& e : entries_) r_desc_.push_back(e.r);
  std::sort(r_desc_.begin(), r_desc_.end(), std::greater<>());
  r_desc_.erase(std::unique(r_desc_.begin(), r_desc_.end()), r_desc_.end());
  nodes_.resize(r_desc_.size() + 1);

  first_node_.resize(entries_.size());
  slot_offset_.resize(entries_.size() + 1, 0);
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(r_desc_.begin(), r_desc_.end(), entries_[e].r, std::greater<>()) - r_desc_.begin());
    first_node_[e] = static_cast<std::uint32_t>(pos + 1);
    std::uint32_t hops = 0;
    for (std::size_t i = pos + 1; i < nodes_.size(); i += i & (~i + 1)) ++hops;
    slot_offset_[e + 1] = slot_offset_[e] + hops;
  }
  slots_.resize(slot_offset_.back());

  // Routing entries in ascending angle order leaves every node list sorted.
  // Equal angles share the first slot of their run.
  std::vector<std::size_t> by_theta(entries_.size());
  std::iota(by_theta.begin(), by_theta.end(), 0);
  std::stable_sort(by_theta.begin(), by_theta.end(),
                   [&](std::size_t a, std::size_t b) { return entries_[a].theta < entries_[b].theta; });
  std::vector<std::uint32_t> run_start(nodes_.size(), 0);
  for (std::size_t e : by_theta) {
    const double theta = entries_[e].theta;
    std::uint32_t k = slot_offset_[e];
    for (std::size_t i = first_node_[e]; i < nodes_.size(); i += i & (~i + 1)) {
      auto& list = nodes_[i].thetas;
      if (list.empty() || list.back() != theta) run_start[i] = static_cast<std::uint32_t>(list.size());
      slots_[k++] = run_start[i];
      list.push_back(theta);
    }
  }
  for (auto& node : nodes_) node.fenwick.assign(node.thetas.size() + 1, CountSum{});
}

void RangeStructure2D::insert(std::size_t entry) {
  const AngleOrdinate& e = entries_.at(entry);
  std::uint32_t k = slot_offset_[entry];
  for (std::size_t i = first_node_[entry]; i < nodes_.size(); i += i & (~i + 1)) {
    Node& node = nodes_[i];
    for (std::size_t f = slots_[k++] + 1; f < node.fenwick.size(); f += f & (~f + 1)) {
      node.fenwick[f].count += 1;
      node.fenwick[f].sum += e.theta;
    }
    node.total.count += 1;
    node.total.sum += e.theta;
  }
  ++inserted_;
}

std::size_t RangeStructure2D::rank_above(double r_min) const {
  return static_cast<std::size_t>(
      std::partition_point(r_desc_.begin(), r_desc_.end(), [r_min](double r) { return r > r_min; }) - r_desc_.begin());
}

void RangeStructure2D::query_partition(std::span<const double> cuts, double r_min, std::span<CountSum> out) const {
  std::fill(out.begin(), out.end(), CountSum{});
  if (cuts.size() < 2) return;
  constexpr std::size_t kMaxCuts = 16;
  CountSum prefix[kMaxCuts];
  const std::size_t n_cuts = std::min(cuts.size(), kMaxCuts);

  for (std::size_t i = rank_above(r_min); i > 0; i -= i & (~i + 1)) {
    const Node& node = nodes_[i];
    if (node.total.count == 0) continue;
    auto from = node.thetas.begin();
    for (std::size_t c = 0; c < n_cuts; ++c) {
      // All angles lie in [0, pi): cuts at or beyond the ends need no search.
      if (cuts[c] <= 0.0) {
        prefix[c] = {};
      } else if (cuts[c] >= kPi) {
        prefix[c] = node.total;
      } else if (c > 0 && cuts[c] == cuts[c - 1]) {
        prefix[c] = prefix[c - 1];
      } else {
        from = std::lower_bound(from, node.thetas.end(), cuts[c]);
        CountSum acc;
        for (auto k = static_cast<std::size_t>(from - node.thetas.begin()); k > 0; k -= k & (~k + 1)) {
          acc += node.fenwick[k];
        }
        prefix[c] = acc;
      }
    }
    for (std::size_t c = 0; c + 1 < n_cuts; ++c) {
      out[c].count += prefix[c + 1].count - prefix[c].count;
      out[c].sum += prefix[c + 1].sum - prefix[c].sum;
    }
  }
}

CountSum RangeStructure2D::query(double theta_lo, double theta_hi, double r_min) const {
  if (!(theta_lo < theta_hi)) return {};
  const double cuts[2] = {theta_lo, theta_hi};
  CountSum out[1];
  query_partition(cuts, r_min, out);
  return out[0];
}

std::string_view category_name(AngleCategory c) {
  switch (c) {
    case AngleCategory::LIL: return "LIL";
    case AngleCategory::LIG: return "LIG";
    case AngleCategory::LOG: return "LOG";
    case AngleCategory::LOL: return "LOL";
    case AngleCategory::RIL: return "RIL";
    case AngleCategory::RIG: return "RIG";
    case AngleCategory::ROG: return "ROG";
    case AngleCategory::ROL: return "ROL";
  }
  return "?";
}

std::pair<double, double> category_offsets(AngleCategory c, double t) {
  switch (c) {
    case AngleCategory::LIL: return {0.0, t};
    case AngleCategory::LIG: return {t, kPi / 2};
    case AngleCategory::LOG: return {kPi / 2, kPi - t};
    case AngleCategory::LOL: return {kPi - t, kPi};
    case AngleCategory::RIL: return {-t, 0.0};
    case AngleCategory::RIG: return {-kPi / 2, -t};
    case AngleCategory::ROG: return {-kPi + t, -kPi / 2};
    case AngleCategory::ROL: return {-kPi, -kPi + t};
  }
  return {0.0, 0.0};
}

namespace {

// Categories in ascending order of their offsets; consecutive ones share a
// boundary, so together they tile [-pi, pi).
constexpr std::array<AngleCategory, 8> kAscending = {AngleCategory::ROL, AngleCategory::ROG, AngleCategory::RIG,
                                                     AngleCategory::RIL, AngleCategory::LIL, AngleCategory::LIG,
                                                     AngleCategory::LOG, AngleCategory::LOL};

}  // namespace

AngleCategory categorize(double theta_i, double theta_j, double t) {
  for (AngleCategory c : kAscending) {
    const auto [lo, hi] = category_offsets(c, t);
    if (theta_j >= theta_i + lo && theta_j < theta_i + hi) return c;
  }
  // Only reachable when theta_j - theta_i falls outside [-pi, pi).
  return theta_j < theta_i ? AngleCategory::ROL : AngleCategory::LOL;
}

AngleCategoryStats category_stats(const RangeStructure2D& index, double theta_i, double r_i, double t) {
  std::array<double, 9> cuts;
  cuts[0] = std::clamp(theta_i + category_offsets(kAscending[0], t).first, 0.0, kPi);
  for (std::size_t k = 0; k < kAscending.size(); ++k) {
    cuts[k + 1] = std::clamp(theta_i + category_offsets(kAscending[k], t).second, 0.0, kPi);
  }
  std::array<CountSum, 8> parts;
  index.query_partition(cuts, r_i, parts);
  AngleCategoryStats stats;
  for (std::size_t k = 0; k < kAscending.size(); ++k) stats[kAscending[k]] = parts[k];
  return stats;
}

CrossingDeviation deviation_from_categories(const AngleCategoryStats& stats, double theta_i, double t) {
  auto n = [&](AngleCategory c) { return static_cast<double>(stats[c].count); };
  auto s = [&](AngleCategory c) { return stats[c].sum; };
  using enum AngleCategory;

  double dev = 0.0;
  dev += t * n(LIL) - (s(LIL) - theta_i * n(LIL));
  dev += (s(LIG) - theta_i * n(LIG)) - t * n(LIG);
  dev += (theta_i * n(LOG) - (s(LOG) - kPi * n(LOG))) - t * n(LOG);
  dev += t * n(LOL) - (theta_i * n(LOL) - (s(LOL) - kPi * n(LOL)));
  dev += t * n(RIL) - (theta_i * n(RIL) - s(RIL));
  dev += (theta_i * n(RIG) - s(RIG)) - t * n(RIG);
  dev += ((s(ROG) + kPi * n(ROG)) - theta_i * n(ROG)) - t * n(ROG);
  dev += t * n(ROL) - ((s(ROL) + kPi * n(ROL)) - theta_i * n(ROL));

  std::uint64_t count = 0;
  for (const auto& cs : stats.by_category) count += cs.count;
  return {count, dev};
}

CrossingDeviation strip_crossing_deviation(std::span<const StripSegment> segments, double ideal_angle) {
  std::vector<StripSegment> sorted(segments.begin(), segments.end());
  std::sort(sorted.begin(), sorted.end(), [](const StripSegment& a, const StripSegment& b) {
    if (a.l != b.l) return a.l < b.l;
    if (a.r != b.r) return a.r < b.r;
    return a.theta < b.theta;
  });
  std::vector<AngleOrdinate> entries(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) entries[i] = {sorted[i].theta, sorted[i].r};
  RangeStructure2D index(entries);

  CrossingDeviation total;
  for (std::size_t begin = 0; begin < sorted.size();) {
    std::size_t end = begin;
    while (end < sorted.size() && sorted[end].l == sorted[begin].l) ++end;
    // Equal l never crosses: query the whole run before inserting any of it.
    for (std::size_t i = begin; i < end; ++i) {
      const auto stats = category_stats(index, sorted[i].theta, sorted[i].r, ideal_angle);
      total += deviation_from_categories(stats, sorted[i].theta, ideal_angle);
    }
    for (std::size_t i = begin; i < end; ++i) index.insert(i);
    begin = end;
  }
  return total;
}

}  // namespace readability::enhanced
