#include <chrono>
#include <cmath>
#include <functional>

#include "readability/errors.hpp"
#include "readability/metrics_enhanced.hpp"
#include "readability/metrics_exact.hpp"
#include "readability/report.hpp"

namespace readability {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::NodeOcclusion: return "nc";
    case Metric::MinimumAngle: return "ma";
    case Metric::EdgeLengthVariation: return "ml";
    case Metric::EdgeCrossing: return "ec";
    case Metric::EdgeCrossingAngle: return "eca";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Oracle: return "oracle";
    case Mode::ExactParallel: return "exact-parallel";
    case Mode::Enhanced: return "enhanced";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "oracle") return Mode::Oracle;
  if (name == "exact-parallel" || name == "exact") return Mode::ExactParallel;
  if (name == "enhanced") return Mode::Enhanced;
  return std::nullopt;
}

std::string_view orientation_name(StripOrientation o) {
  switch (o) {
    case StripOrientation::Vertical: return "vertical";
    case StripOrientation::Horizontal: return "horizontal";
    case StripOrientation::Both: return "both";
  }
  return "?";
}

std::optional<StripOrientation> parse_orientation(std::string_view name) {
  if (name == "vertical") return StripOrientation::Vertical;
  if (name == "horizontal") return StripOrientation::Horizontal;
  if (name == "both") return StripOrientation::Both;
  return std::nullopt;
}

void MetricParams::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ParameterError("radius must be finite and positive");
  if (!(ideal_angle > 0.0 && ideal_angle <= geometry::kPi / 2)) {
    throw ParameterError("ideal angle must lie in (0, 90] degrees");
  }
  if (!(strip_width > 0.0) || !std::isfinite(strip_width)) {
    throw ParameterError("strip width must be finite and positive");
  }
}

std::optional<double> ReadabilityReport::value(Metric m) const {
  switch (m) {
    case Metric::NodeOcclusion:
      return node_occlusion ? std::optional<double>(static_cast<double>(*node_occlusion)) : std::nullopt;
    case Metric::MinimumAngle: return minimum_angle;
    case Metric::EdgeLengthVariation: return edge_length_variation;
    case Metric::EdgeCrossing:
      return edge_crossing ? std::optional<double>(static_cast<double>(*edge_crossing)) : std::nullopt;
    case Metric::EdgeCrossingAngle: return edge_crossing_angle;
  }
  return std::nullopt;
}

namespace {

// Interface over the three evaluation paths so one driver can time them.
struct MetricPath {
  std::function<std::uint64_t()> nc;
  std::function<MetricValue()> ma;
  std::function<MetricValue()> ml;
  std::function<std::uint64_t()> ec;
  std::function<double()> eca;
};

template <typename F>
auto timed(ReadabilityReport& report, Metric m, F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto result = fn();
  report.elapsed[std::string(metric_name(m))] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ReadabilityReport run(Mode mode, const MetricParams& params, std::size_t threads, std::span<const Metric> metrics,
                      const MetricPath& path) {
  params.validate();
  ReadabilityReport report;
  report.mode = mode;
  report.params = params;
  report.threads = threads;
  for (Metric m : metrics) {
    switch (m) {
      case Metric::NodeOcclusion: report.node_occlusion = timed(report, m, path.nc); break;
      case Metric::MinimumAngle: {
        auto v = timed(report, m, path.ma);
        report.minimum_angle = v.value;
        if (!v.warning.empty()) report.warnings.push_back(v.warning);
        break;
      }
      case Metric::EdgeLengthVariation: {
        auto v = timed(report, m, path.ml);
        report.edge_length_variation = v.value;
        if (!v.warning.empty()) report.warnings.push_back(v.warning);
        break;
      }
      case Metric::EdgeCrossing: report.edge_crossing = timed(report, m, path.ec); break;
      case Metric::EdgeCrossingAngle: report.edge_crossing_angle = timed(report, m, path.eca); break;
    }
  }
  return report;
}

}  // namespace

ReadabilityReport evaluate_oracle(const LayoutGraph& g, const MetricParams& params, std::span<const Metric> metrics) {
  return run(Mode::Oracle, params, 1, metrics,
             MetricPath{
                 [&] { return oracle::node_occlusion(g, params.radius); },
                 [&] { return oracle::minimum_angle(g); },
                 [&] { return oracle::edge_length_variation(g); },
                 [&] { return oracle::edge_crossing(g); },
                 [&] { return oracle::edge_crossing_angle(g, params.ideal_angle); },
             });
}

ReadabilityReport evaluate_exact(const LayoutGraph& g, const MetricParams& params, const dataflow::ExecConfig& exec,
                                 std::span<const Metric> metrics) {
  exec.validate();
  return run(Mode::ExactParallel, params, exec.workers, metrics,
             MetricPath{
                 [&] { return parallel::node_occlusion(g, params.radius, exec); },
                 [&] { return parallel::minimum_angle(g, exec); },
                 [&] { return parallel::edge_length_variation(g, exec); },
                 [&] { return parallel::edge_crossing(g, exec); },
                 [&] { return parallel::edge_crossing_angle(g, params.ideal_angle, exec); },
             });
}

ReadabilityReport evaluate_enhanced(const LayoutGraph& g, const MetricParams& params, const dataflow::ExecConfig& exec,
                                    std::span<const Metric> metrics) {
  exec.validate();
  return run(Mode::Enhanced, params, exec.workers, metrics,
             MetricPath{
                 [&] { return enhanced::node_occlusion_grid(g, params.radius, exec); },
                 [&] { return parallel::minimum_angle(g, exec); },
                 [&] { return parallel::edge_length_variation(g, exec); },
                 [&] { return enhanced::edge_crossing_enhanced(g, params.strip_width, params.orientation, exec); },
                 [&] {
                   return enhanced::edge_crossing_angle_enhanced(g, params.strip_width, params.ideal_angle,
                                                                 params.orientation, exec)
                       .value;
                 },
             });
}

}  // namespace readability
