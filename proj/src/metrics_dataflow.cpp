#include <cmath>

#include "readability/errors.hpp"
#include "readability/metrics_exact.hpp"

namespace readability::parallel {

using dataflow::Array;
using dataflow::Column;
using dataflow::ColumnType;
using dataflow::ExecConfig;
using dataflow::Fold;
using dataflow::JoinSpec;
using dataflow::Pair;
using dataflow::Row;
using dataflow::Schema;
using dataflow::Table;
using dataflow::Value;
using geometry::kTwoPi;

namespace {

geometry::Point point(const Value& v) {
  const Pair& p = v.as_pair();
  return {p.first, p.second};
}

// Edges with both endpoint positions: (v, vpos, u, upos), v < u.
Table edge_positions(const LayoutGraph& g, const ExecConfig& exec) {
  const Table pos = positions_table(g, exec);
  const Table edges = edges_table(g, exec);
  const Table with_src =
      dataflow::join(edges, rename(pos, {"src_id", "src_pos"}), JoinSpec{{{"src", "src_id"}}, {}}, exec);
  const Table with_both =
      dataflow::join(with_src, rename(pos, {"dst_id", "dst_pos"}), JoinSpec{{{"dst", "dst_id"}}, {}}, exec);
  const auto& s = with_both.schema();
  const std::size_t src = s.index_of("src"), dst = s.index_of("dst");
  const std::size_t src_pos = s.index_of("src_pos"), dst_pos = s.index_of("dst_pos");
  return dataflow::flat_map(
      with_both,
      Schema{{"v", ColumnType::Int}, {"vpos", ColumnType::Pair}, {"u", ColumnType::Int}, {"upos", ColumnType::Pair}},
      [=](const Row& r, std::vector<Row>& out) { out.push_back({r[src], r[src_pos], r[dst], r[dst_pos]}); }, exec);
}

// The crossing join of Alg. 4: ordered edge pairs (v1,u1) < (v2,u2) that
// share no vertex and satisfy the four-orientation predicate.
Table crossing_pairs(const LayoutGraph& g, const ExecConfig& exec) {
  const Table epos = edge_positions(g, exec);
  const Table e1 = rename(epos, {"v1", "vpos1", "u1", "upos1"});
  const Table e2 = rename(epos, {"v2", "vpos2", "u2", "upos2"});
  JoinSpec spec;
  spec.predicate = [](const Row& a, const Row& b) {
    const auto v1 = a[0].as_int(), u1 = a[2].as_int();
    const auto v2 = b[0].as_int(), u2 = b[2].as_int();
    if (!(std::pair(v1, u1) < std::pair(v2, u2))) return false;
    if (v1 == v2 || v1 == u2 || u1 == v2 || u1 == u2) return false;
    return geometry::properly_intersect({point(a[1]), point(a[3])}, {point(b[1]), point(b[3])});
  };
  return dataflow::join(e1, e2, spec, exec);
}

// aggregateMessages: every edge sends `message(from, to)` to both endpoints
// (or only to the smaller id when `both_ends` is false); messages are
// collected into an array per receiving vertex.
template <typename Message>
Table collect_messages(const LayoutGraph& g, const ExecConfig& exec, bool both_ends, Message message) {
  const Table epos = edge_positions(g, exec);
  const Table messages = dataflow::flat_map(
      epos, Schema{{"vertex", ColumnType::Int}, {"message", ColumnType::Real}},
      [&](const Row& r, std::vector<Row>& out) {
        const auto v = point(r[1]), u = point(r[3]);
        out.push_back({r[0], Value(message(v, u))});
        if (both_ends) out.push_back({r[2], Value(message(u, v))});
      },
      exec);
  return dataflow::group_aggregate(messages, {"vertex"},
                                   dataflow::folds::collect_list(messages.schema(), "message", "messages"), exec);
}

}  // namespace

Table positions_table(const LayoutGraph& g, const ExecConfig& exec) {
  std::vector<Row> rows;
  rows.reserve(g.num_vertices());
  for (const auto& v : g.vertices()) rows.push_back({Value(v.id), Value(Pair{v.position.x, v.position.y})});
  return Table(Schema{{"id", ColumnType::Int}, {"pos", ColumnType::Pair}}, std::move(rows), exec.target_partitions);
}

Table edges_table(const LayoutGraph& g, const ExecConfig& exec) {
  std::vector<Row> rows;
  rows.reserve(g.num_edges());
  for (const auto& e : g.edges()) rows.push_back({Value(e.u), Value(e.v)});
  return Table(Schema{{"src", ColumnType::Int}, {"dst", ColumnType::Int}}, std::move(rows), exec.target_partitions);
}

std::uint64_t node_occlusion(const LayoutGraph& g, double radius, const ExecConfig& exec) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ParameterError("radius must be finite and positive");
  const Table pos = positions_table(g, exec);
  JoinSpec spec;
  spec.predicate = [radius](const Row& a, const Row& b) {
    return a[0].as_int() < b[0].as_int() && geometry::discs_overlap(point(a[1]), point(b[1]), radius);
  };
  return dataflow::count(dataflow::join(rename(pos, {"v", "pos1"}), rename(pos, {"u", "pos2"}), spec, exec));
}

MetricValue minimum_angle(const LayoutGraph& g, const ExecConfig& exec) {
  if (g.num_edges() == 0) return {1.0, "minimum angle undefined without edges; reporting 1"};
  const Table angles = collect_messages(g, exec, true, [](const geometry::Point& from, const geometry::Point& to) {
    return geometry::incident_angle(from, to);
  });
  const std::size_t col = angles.schema().index_of("messages");
  const Table scored = dataflow::with_column(
      angles, {"d", ColumnType::Real},
      [col](const Row& r) {
        const Array& a = r[col].as_array();
        std::vector<double> values;
        values.reserve(a.size());
        for (const auto& v : a) values.push_back(v.as_real());
        const double ideal = kTwoPi / static_cast<double>(values.size());
        return Value((ideal - min_gap(std::move(values))) / ideal);
      },
      exec);
  const Pair total =
      dataflow::aggregate(scored, dataflow::folds::count_and_sum(scored.schema(), "d", "d_total"), exec).as_pair();
  return {1.0 - total.second / total.first, {}};
}

MetricValue edge_length_variation(const LayoutGraph& g, const ExecConfig& exec) {
  if (g.num_edges() <= 1) return {0.0, "edge length variation needs at least two edges; reporting 0"};
  // Each length travels only to the smaller endpoint so N_e = |E|.
  const Table collected = collect_messages(g, exec, false, [](const geometry::Point& from, const geometry::Point& to) {
    return geometry::distance(from, to);
  });
  const Table lengths = dataflow::explode(collected, "messages", ColumnType::Real, exec);
  const std::size_t col = lengths.schema().index_of("messages");

  const double n = static_cast<double>(dataflow::count(lengths));
  if (n != static_cast<double>(g.num_edges())) throw InvariantError("edge length collection lost or duplicated edges");
  const double mean =
      dataflow::aggregate(lengths, dataflow::folds::sum(lengths.schema(), "messages", "total"), exec).as_real() / n;

  Fold spread{
      {"spread", ColumnType::Real},
      [] { return Value(0.0); },
      [=](Value& s, const Row& r) {
        const double d = r[col].as_real() - mean;
        s = Value(s.as_real() + d * d / (n * mean * mean));
      },
      [](Value& s, const Value& o) { s = Value(s.as_real() + o.as_real()); },
      {},
  };
  const double la = std::sqrt(dataflow::aggregate(lengths, spread, exec).as_real());
  return {la / std::sqrt(n - 1.0), {}};
}

std::uint64_t edge_crossing(const LayoutGraph& g, const ExecConfig& exec) {
  return dataflow::count(crossing_pairs(g, exec));
}

double edge_crossing_angle(const LayoutGraph& g, double ideal_angle, const ExecConfig& exec) {
  if (!(ideal_angle > 0.0 && ideal_angle <= geometry::kPi / 2)) {
    throw ParameterError("ideal angle must lie in (0, pi/2]");
  }
  const Table pairs = crossing_pairs(g, exec);
  const auto& s = pairs.schema();
  const std::size_t v1 = s.index_of("vpos1"), u1 = s.index_of("upos1");
  const std::size_t v2 = s.index_of("vpos2"), u2 = s.index_of("upos2");
  const Table angled = dataflow::with_column(
      pairs, {"deviation", ColumnType::Real},
      [=](const Row& r) {
        const double a = geometry::axis_angle({point(r[v1]), point(r[u1])});
        const double b = geometry::axis_angle({point(r[v2]), point(r[u2])});
        return Value(std::abs(ideal_angle - geometry::crossing_angle(a, b)) / ideal_angle);
      },
      exec);
  const Pair total =
      dataflow::aggregate(angled, dataflow::folds::count_and_sum(angled.schema(), "deviation", "dev"), exec).as_pair();
  if (total.first == 0.0) return 1.0;
  return 1.0 - total.second / total.first;
}

}  // namespace readability::parallel
