#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "readability/dataflow.hpp"
#include "readability/layout_graph.hpp"
#include "readability/report.hpp"

namespace readability {

// A real-valued metric plus the warning raised when its input is degenerate.
struct MetricValue {
  double value = 0.0;
  std::string warning;
};

// Smallest circular gap between sorted angles in [0, 2pi), including the
// wrap-around gap. A single angle yields 2pi. Throws ParameterError if empty.
double min_gap(std::vector<double> angles);

// Serial brute-force reference implementations.
namespace oracle {

std::uint64_t node_occlusion(const LayoutGraph& g, double radius);
MetricValue minimum_angle(const LayoutGraph& g);
MetricValue edge_length_variation(const LayoutGraph& g);
std::uint64_t edge_crossing(const LayoutGraph& g);
double edge_crossing_angle(const LayoutGraph& g, double ideal_angle);

}  // namespace oracle

// The same metrics expressed as join / explode / group-by / aggregate
// pipelines over dataflow tables.
namespace parallel {

// D_pos: (id: int, pos: pair)
dataflow::Table positions_table(const LayoutGraph& g, const dataflow::ExecConfig& exec);
// D_e: (src: int, dst: int), src < dst
dataflow::Table edges_table(const LayoutGraph& g, const dataflow::ExecConfig& exec);

std::uint64_t node_occlusion(const LayoutGraph& g, double radius, const dataflow::ExecConfig& exec);
MetricValue minimum_angle(const LayoutGraph& g, const dataflow::ExecConfig& exec);
MetricValue edge_length_variation(const LayoutGraph& g, const dataflow::ExecConfig& exec);
std::uint64_t edge_crossing(const LayoutGraph& g, const dataflow::ExecConfig& exec);
double edge_crossing_angle(const LayoutGraph& g, double ideal_angle, const dataflow::ExecConfig& exec);

}  // namespace parallel

ReadabilityReport evaluate_oracle(const LayoutGraph& g, const MetricParams& params,
                                  std::span<const Metric> metrics = kAllMetrics);

ReadabilityReport evaluate_exact(const LayoutGraph& g, const MetricParams& params,
                                 const dataflow::ExecConfig& exec,
                                 std::span<const Metric> metrics = kAllMetrics);

}  // namespace readability
