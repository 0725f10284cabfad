#include "readability/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "readability/errors.hpp"
#include "readability/graphio.hpp"
#include "readability/metrics_enhanced.hpp"
#include "readability/metrics_exact.hpp"

namespace readability::cli {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<Metric> parse_metrics(const std::vector<std::string>& names) {
  std::vector<Metric> metrics;
  for (const auto& name : names) {
    if (name == "all") {
      metrics.assign(kAllMetrics.begin(), kAllMetrics.end());
      continue;
    }
    const auto m = parse_metric(name);
    if (!m) throw ParameterError("unknown metric '" + name + "' (expected nc, ma, ml, ec, eca or all)");
    if (std::find(metrics.begin(), metrics.end(), *m) == metrics.end()) metrics.push_back(*m);
  }
  if (metrics.empty()) throw ParameterError("no metrics selected");
  std::sort(metrics.begin(), metrics.end());
  return metrics;
}

// Writes to --output when given, otherwise to the result stream.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw InputError("failed writing '" + path + "'");
}

struct CommonOptions {
  std::string edges;
  std::string layout;
  std::vector<std::string> metrics{"all"};
  double radius = 0.5;
  double ideal_angle_deg = 70.0;
  double strip_width = 0.05;
  std::string orientation = "vertical";
  std::size_t threads = 1;
  std::string output;
  std::string format = "json";

  MetricParams params() const {
    MetricParams p;
    p.radius = radius;
    p.ideal_angle = ideal_angle_deg * geometry::kPi / 180.0;
    p.strip_width = strip_width;
    const auto o = parse_orientation(orientation);
    if (!o) throw ParameterError("unknown orientation '" + orientation + "'");
    p.orientation = *o;
    p.validate();
    return p;
  }
};

void add_metric_options(CLI::App& cmd, CommonOptions& o, bool with_metrics) {
  cmd.add_option("--edges", o.edges, "edge list file")->required();
  cmd.add_option("--layout", o.layout, "layout CSV (id,x,y)")->required();
  if (with_metrics) {
    cmd.add_option("--metrics", o.metrics, "comma-separated subset of nc,ma,ml,ec,eca or all")->delimiter(',');
  }
  cmd.add_option("--radius", o.radius, "boundary disc radius in layout units");
  cmd.add_option("--ideal-angle", o.ideal_angle_deg, "ideal crossing angle in degrees");
  cmd.add_option("--strip-width,--strip-fraction", o.strip_width, "strip width in layout units");
  cmd.add_option("--orientation", o.orientation, "vertical, horizontal or both")
      ->check(CLI::IsMember({"vertical", "horizontal", "both"}));
  cmd.add_option("--output,-o", o.output, "output file (default standard output)");
}

LayoutGraph load(const CommonOptions& o, std::ostream& err) {
  const auto edges = io::read_edgelist(o.edges);
  if (edges.stats.self_loops > 0 || edges.stats.duplicates > 0) {
    err << "dropped " << edges.stats.self_loops << " self-loops and " << edges.stats.duplicates
        << " duplicate edges\n";
  }
  auto g = io::assemble(edges, io::read_layout(o.layout));
  err << "loaded " << g.num_vertices() << " vertices, " << g.num_edges() << " edges\n";
  return g;
}

std::string report_csv(const ReadabilityReport& r) {
  std::ostringstream s;
  s << "metric,value,seconds\n";
  for (Metric m : kAllMetrics) {
    const auto v = r.value(m);
    if (!v) continue;
    const auto name = std::string(metric_name(m));
    const auto t = r.elapsed.find(name);
    s << name << ',' << format_double(*v) << ',' << (t == r.elapsed.end() ? 0.0 : t->second) << '\n';
  }
  return s.str();
}

int cmd_eval(const CommonOptions& o, const std::string& mode_text, std::ostream& out, std::ostream& err) {
  const auto mode = parse_mode(mode_text);
  if (!mode) throw ParameterError("unknown mode '" + mode_text + "'");
  const auto params = o.params();
  const auto metrics = parse_metrics(o.metrics);
  const auto g = load(o, err);
  const auto report = evaluate(*mode, g, params, dataflow::ExecConfig::with_workers(o.threads), metrics);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  emit(o.output, o.format == "csv" ? report_csv(report) : io::serialize_report(report), out);
  return kOk;
}

int cmd_compare(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const auto params = o.params();
  const auto metrics = parse_metrics(o.metrics);
  const auto g = load(o, err);
  const auto rows = compare(g, params, dataflow::ExecConfig::with_workers(o.threads), metrics);
  std::ostringstream s;
  if (o.format == "json") {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : rows) {
      doc.push_back({{"metric", std::string(metric_name(r.metric))},
                     {"oracle", r.oracle},
                     {"enhanced", r.enhanced},
                     {"pct_error", r.pct_error ? nlohmann::json(*r.pct_error) : nlohmann::json(nullptr)}});
    }
    s << doc.dump(2) << '\n';
  } else {
    s << "metric,oracle,enhanced,pct_error\n";
    for (const auto& r : rows) {
      s << metric_name(r.metric) << ',' << format_double(r.oracle) << ',' << format_double(r.enhanced) << ','
        << (r.pct_error ? format_double(*r.pct_error) : std::string("flagged")) << '\n';
    }
  }
  for (const auto& r : rows) {
    if (!r.pct_error) err << "warning: " << metric_name(r.metric) << " oracle is 0 but enhanced is not\n";
  }
  emit(o.output, s.str(), out);
  return kOk;
}

int cmd_bench(const CommonOptions& o, const std::string& mode_text, const std::vector<std::size_t>& thread_list,
              int repeat, std::ostream& out, std::ostream& err) {
  const auto mode = parse_mode(mode_text);
  if (!mode) throw ParameterError("unknown mode '" + mode_text + "'");
  if (thread_list.empty()) throw ParameterError("thread list is empty");
  if (!std::is_sorted(thread_list.begin(), thread_list.end()) ||
      std::adjacent_find(thread_list.begin(), thread_list.end()) != thread_list.end() || thread_list.front() < 1) {
    throw ParameterError("thread list must be positive and strictly ascending");
  }
  if (repeat < 1) throw ParameterError("repeat must be at least 1");
  const auto params = o.params();
  const auto metrics = parse_metrics(o.metrics);
  const auto g = load(o, err);

  // Same partitioning for every thread count so reductions run in the same
  // order and values can be compared exactly.
  const std::size_t partitions = 4 * thread_list.back();

  std::vector<ReadabilityReport> best;
  for (std::size_t threads : thread_list) {
    const dataflow::ExecConfig exec{threads, partitions};
    ReadabilityReport fastest;
    for (int rep = 0; rep < repeat; ++rep) {
      err << "bench: " << mode_name(*mode) << " threads=" << threads << " run " << rep + 1 << "/" << repeat << '\n';
      auto report = evaluate(*mode, g, params, exec, metrics);
      if (rep == 0) {
        fastest = std::move(report);
        continue;
      }
      for (auto& [name, secs] : fastest.elapsed) secs = std::min(secs, report.elapsed.at(name));
    }
    best.push_back(std::move(fastest));
  }

  std::ostringstream s;
  s << "threads,metric,seconds,speedup,value\n";
  bool consistent = true;
  for (std::size_t i = 0; i < best.size(); ++i) {
    for (Metric m : metrics) {
      const std::string name(metric_name(m));
      const double secs = best[i].elapsed.at(name);
      const double base = best[0].elapsed.at(name);
      const double speedup = *mode == Mode::Oracle ? 1.0 : (secs > 0.0 ? base / secs : 1.0);
      const double value = *best[i].value(m);
      if (value != *best[0].value(m)) consistent = false;
      s << thread_list[i] << ',' << name << ',' << format_double(secs) << ',' << format_double(speedup) << ','
        << format_double(value) << '\n';
    }
  }
  emit(o.output, s.str(), out);
  if (!consistent) {
    err << "error: metric values differ across thread counts\n";
    return kInternal;
  }
  return kOk;
}

struct GenOptions {
  std::string method = "random";
  std::string edges;
  std::size_t vertices = 0;
  std::size_t num_edges = 0;
  std::string graph_out;
  std::uint64_t seed = 1;
  double extent = 100.0;
  int iterations = 50;
  std::string output;
};

int cmd_gen(const GenOptions& o, const CLI::App& cmd, std::ostream& out, std::ostream& err) {
  const bool synthesize = cmd.count("--vertices") > 0 || cmd.count("--num-edges") > 0;
  if (synthesize == !o.edges.empty()) {
    throw ParameterError("gen needs either --edges or --vertices with --num-edges");
  }
  io::EdgeList edges;
  if (synthesize) {
    edges = gen::random_graph(o.vertices, o.num_edges, o.seed);
    err << "generated random graph: " << edges.vertices.size() << " vertices, " << edges.edges.size() << " edges\n";
    if (!o.graph_out.empty()) io::write_edgelist(std::filesystem::path(o.graph_out), edges);
  } else {
    edges = io::read_edgelist(o.edges);
  }
  LayoutGraph g = [&] {
    if (o.method == "fr") {
      gen::FrOptions fr;
      fr.iterations = o.iterations;
      fr.extent = o.extent;
      return gen::fr_layout(edges, fr, o.seed);
    }
    return gen::random_layout(edges, o.extent, o.seed);
  }();
  std::ostringstream s;
  io::write_layout(s, g);
  emit(o.output, s.str(), out);
  return kOk;
}

}  // namespace

ReadabilityReport evaluate(Mode mode, const LayoutGraph& g, const MetricParams& params,
                           const dataflow::ExecConfig& exec, std::span<const Metric> metrics) {
  switch (mode) {
    case Mode::Oracle: return evaluate_oracle(g, params, metrics);
    case Mode::ExactParallel: return evaluate_exact(g, params, exec, metrics);
    case Mode::Enhanced: return evaluate_enhanced(g, params, exec, metrics);
  }
  throw InvariantError("unknown evaluation mode");
}

std::optional<double> percentage_error(double oracle, double enhanced) {
  if (oracle == 0.0) return enhanced == 0.0 ? std::optional<double>(0.0) : std::nullopt;
  return std::abs(enhanced - oracle) / std::abs(oracle) * 100.0;
}

std::vector<CompareRow> compare(const LayoutGraph& g, const MetricParams& params, const dataflow::ExecConfig& exec,
                                std::span<const Metric> metrics) {
  const auto truth = evaluate_oracle(g, params, metrics);
  const auto approx = evaluate_enhanced(g, params, exec, metrics);
  std::vector<CompareRow> rows;
  for (Metric m : metrics) {
    CompareRow row{m, *truth.value(m), *approx.value(m), std::nullopt};
    row.pct_error = percentage_error(row.oracle, row.enhanced);
    rows.push_back(row);
  }
  return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Readability metrics for graph layouts"};
  app.require_subcommand(1);

  CommonOptions eval_opts;
  std::string eval_mode = "oracle";
  auto* eval = app.add_subcommand("eval", "evaluate metrics on a layout");
  add_metric_options(*eval, eval_opts, true);
  eval->add_option("--mode", eval_mode, "oracle, exact (exact-parallel) or enhanced")
      ->check(CLI::IsMember({"oracle", "exact", "exact-parallel", "enhanced"}));
  eval->add_option("--threads", eval_opts.threads, "worker threads")->check(CLI::PositiveNumber);
  eval->add_option("--format", eval_opts.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CommonOptions cmp_opts;
  cmp_opts.metrics = {"nc", "ec", "eca"};
  cmp_opts.format = "csv";
  auto* cmp = app.add_subcommand("compare", "percentage error of the enhanced path against the oracle");
  add_metric_options(*cmp, cmp_opts, true);
  cmp->add_option("--threads", cmp_opts.threads, "worker threads")->check(CLI::PositiveNumber);
  cmp->add_option("--format", cmp_opts.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));

  CommonOptions bench_opts;
  bench_opts.metrics = {"ec"};
  std::string bench_mode = "enhanced";
  std::vector<std::size_t> thread_list{1, 2, 4};
  int repeat = 1;
  auto* bench = app.add_subcommand("bench", "time metrics over a list of thread counts");
  add_metric_options(*bench, bench_opts, true);
  bench->add_option("--mode", bench_mode, "oracle, exact (exact-parallel) or enhanced")
      ->check(CLI::IsMember({"oracle", "exact", "exact-parallel", "enhanced"}));
  bench->add_option("--threads-list", thread_list, "ascending thread counts, comma-separated")->delimiter(',');
  bench->add_option("--repeat", repeat, "runs per thread count; the fastest is reported");

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "generate a layout");
  gen->add_option("method", gen_opts.method, "random or fr")->check(CLI::IsMember({"random", "fr"}));
  gen->add_option("--edges", gen_opts.edges, "edge list file");
  gen->add_option("--vertices", gen_opts.vertices, "vertices of a generated random graph");
  gen->add_option("--num-edges", gen_opts.num_edges, "edges of a generated random graph");
  gen->add_option("--graph-out", gen_opts.graph_out, "where to write the generated edge list");
  gen->add_option("--seed", gen_opts.seed, "random seed");
  gen->add_option("--extent", gen_opts.extent, "layout square side");
  gen->add_option("--iterations", gen_opts.iterations, "FR iterations");
  gen->add_option("--output,-o", gen_opts.output, "layout CSV (default standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*eval) return cmd_eval(eval_opts, eval_mode, out, err);
    if (*cmp) return cmd_compare(cmp_opts, out, err);
    if (*bench) return cmd_bench(bench_opts, bench_mode, thread_list, repeat, out, err);
    if (*gen) return cmd_gen(gen_opts, *gen, out, err);
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const SchemaError& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace readability::cli
