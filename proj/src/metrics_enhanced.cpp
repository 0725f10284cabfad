#include "readability/metrics_enhanced.hpp"

#include <algorithm>
#include <cmath>

#include "readability/errors.hpp"

namespace readability::enhanced {

using dataflow::Array;
using dataflow::ColumnType;
using dataflow::Fold;
using dataflow::Pair;
using dataflow::Row;
using dataflow::Schema;
using dataflow::Table;
using dataflow::Value;

std::vector<GridCellKey> overlapped_cells(const geometry::Point& p, double radius) {
  const double cell = 2.0 * radius;
  // Slightly inflated so rounding can never drop a cell the disc touches;
  // an extra cell only costs comparisons.
  const double reach = radius * (1.0 + 1e-9);
  const auto x0 = static_cast<std::int64_t>(std::floor((p.x - reach) / cell));
  const auto x1 = static_cast<std::int64_t>(std::floor((p.x + reach) / cell));
  const auto y0 = static_cast<std::int64_t>(std::floor((p.y - reach) / cell));
  const auto y1 = static_cast<std::int64_t>(std::floor((p.y + reach) / cell));
  std::vector<GridCellKey> cells;
  for (auto ix = x0; ix <= x1; ++ix) {
    for (auto iy = y0; iy <= y1; ++iy) {
      const double lx = static_cast<double>(ix) * cell;
      const double ly = static_cast<double>(iy) * cell;
      const double dx = p.x - std::clamp(p.x, lx, lx + cell);
      const double dy = p.y - std::clamp(p.y, ly, ly + cell);
      if (dx * dx + dy * dy <= reach * reach) cells.push_back({ix, iy});
    }
  }
  return cells;
}

std::uint64_t node_occlusion_grid(const LayoutGraph& g, double radius, const dataflow::ExecConfig& exec) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ParameterError("radius must be finite and positive");

  std::vector<Row> rows;
  rows.reserve(g.num_vertices());
  for (const auto& v : g.vertices()) rows.push_back({Value(v.id), Value(Pair{v.position.x, v.position.y})});
  const Table pos(Schema{{"id", ColumnType::Int}, {"pos", ColumnType::Pair}}, std::move(rows), exec.target_partitions);

  const Table mapped = dataflow::with_column(
      pos, {"cells", ColumnType::Array},
      [radius](const Row& r) {
        const Pair& p = r[1].as_pair();
        Array cells;
        for (const auto& c : overlapped_cells({p.first, p.second}, radius)) {
          cells.push_back(Value(Array{Value(c.ix), Value(c.iy)}));
        }
        return Value(std::move(cells));
      },
      exec);
  const Table by_cell = dataflow::explode(mapped, "cells", ColumnType::Array, exec);

  // group by cell, collecting (id, pos) members
  const Fold members{
      {"members", ColumnType::Array},
      [] { return Value(Array{}); },
      [](Value& s, const Row& r) { s.as_array().push_back(Value(Array{r[0], r[1]})); },
      [](Value& s, const Value& o) {
        auto& a = s.as_array();
        const auto& b = o.as_array();
        a.insert(a.end(), b.begin(), b.end());
      },
      {},
  };
  const Table cells = dataflow::group_aggregate(by_cell, {"cells"}, members, exec);
  const std::size_t col = cells.schema().index_of("members");

  // exact pairwise comparison inside each cell
  const Table pairs = dataflow::flat_map(
      cells, Schema{{"v", ColumnType::Int}, {"u", ColumnType::Int}},
      [col, radius](const Row& r, std::vector<Row>& out) {
        const Array& m = r[col].as_array();
        for (std::size_t i = 0; i < m.size(); ++i) {
          const auto& a = m[i].as_array();
          const Pair& pa = a[1].as_pair();
          for (std::size_t j = i + 1; j < m.size(); ++j) {
            const auto& b = m[j].as_array();
            const Pair& pb = b[1].as_pair();
            if (!geometry::discs_overlap({pa.first, pa.second}, {pb.first, pb.second}, radius)) continue;
            const auto ida = a[0].as_int(), idb = b[0].as_int();
            out.push_back({Value(std::min(ida, idb)), Value(std::max(ida, idb))});
          }
        }
      },
      exec);
  return dataflow::count(dataflow::distinct(pairs, exec));
}

}  // namespace readability::enhanced
