#pragma once

// Command-line front end: eval, gen, compare and bench.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "readability/dataflow.hpp"
#include "readability/layout_graph.hpp"
#include "readability/report.hpp"

namespace readability::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kInput = 3, kInternal = 4 };

// Dispatches on mode. The oracle ignores `exec` and reports one thread.
ReadabilityReport evaluate(Mode mode, const LayoutGraph& g, const MetricParams& params,
                           const dataflow::ExecConfig& exec, std::span<const Metric> metrics);

struct CompareRow {
  Metric metric;
  double oracle = 0.0;
  double enhanced = 0.0;
  std::optional<double> pct_error;  // empty when oracle is 0 but enhanced is not
};

// |enhanced - oracle| / oracle * 100; 0 when both are 0.
std::optional<double> percentage_error(double oracle, double enhanced);

std::vector<CompareRow> compare(const LayoutGraph& g, const MetricParams& params, const dataflow::ExecConfig& exec,
                                std::span<const Metric> metrics);

// Full CLI. Results go to `out` (or the --output file), progress and
// errors to `err`. Returns one of ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace readability::cli
