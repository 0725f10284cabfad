#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "readability/geometry.hpp"

namespace readability {

enum class Metric { NodeOcclusion, MinimumAngle, EdgeLengthVariation, EdgeCrossing, EdgeCrossingAngle };

inline constexpr std::array<Metric, 5> kAllMetrics = {Metric::NodeOcclusion, Metric::MinimumAngle,
                                                      Metric::EdgeLengthVariation, Metric::EdgeCrossing,
                                                      Metric::EdgeCrossingAngle};

// Short names: nc, ma, ml, ec, eca.
std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

enum class Mode { Oracle, ExactParallel, Enhanced };

std::string_view mode_name(Mode m);  // oracle, exact-parallel, enhanced
std::optional<Mode> parse_mode(std::string_view name);

enum class StripOrientation { Vertical, Horizontal, Both };

std::string_view orientation_name(StripOrientation o);
std::optional<StripOrientation> parse_orientation(std::string_view name);

inline constexpr double kDefaultIdealAngle = 7.0 * geometry::kPi / 18.0;  // 70 degrees

struct MetricParams {
  double radius = 0.5;                      // boundary disc radius, layout units
  double ideal_angle = kDefaultIdealAngle;  // radians
  double strip_width = 0.05;                // layout units
  StripOrientation orientation = StripOrientation::Vertical;

  // Throws ParameterError for r <= 0, ideal angle outside (0, pi/2] or
  // strip width <= 0.
  void validate() const;

  friend bool operator==(const MetricParams&, const MetricParams&) = default;
};

struct ReadabilityReport {
  Mode mode = Mode::Oracle;
  MetricParams params;
  std::size_t threads = 1;

  std::optional<std::uint64_t> node_occlusion;
  std::optional<double> minimum_angle;
  std::optional<double> edge_length_variation;
  std::optional<std::uint64_t> edge_crossing;
  std::optional<double> edge_crossing_angle;

  // Wall time per computed metric, keyed by short name.
  std::map<std::string, double> elapsed;
  std::vector<std::string> warnings;

  std::optional<double> value(Metric m) const;

  friend bool operator==(const ReadabilityReport&, const ReadabilityReport&) = default;
};

}  // namespace readability
