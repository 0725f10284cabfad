#include "readability/layout_graph.hpp"

#include <algorithm>
#include <string>

#include "readability/errors.hpp"

namespace readability {

std::vector<Edge> normalize_edges(std::span<const Edge> edges, IngestStats* stats) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  std::size_t loops = 0;
  for (const Edge& e : edges) {
    if (e.u == e.v) {
      ++loops;
      continue;
    }
    out.push_back(e.normalized());
  }
  std::sort(out.begin(), out.end());
  const auto before = out.size();
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (stats) {
    stats->self_loops += loops;
    stats->duplicates += before - out.size();
  }
  return out;
}

LayoutGraph::LayoutGraph(std::vector<Vertex> vertices, std::span<const Edge> edges)
    : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  index_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vertex& v = vertices_[i];
    if (!geometry::is_finite(v.position)) {
      throw InputError("vertex " + std::to_string(v.id) + " has a non-finite coordinate");
    }
    if (!index_.emplace(v.id, i).second) throw InputError("duplicate vertex id " + std::to_string(v.id));
  }

  edges_ = normalize_edges(edges, &stats_);
  edge_index_.reserve(edges_.size());
  for (const Edge& e : edges_) {
    auto a = index_.find(e.u);
    auto b = index_.find(e.v);
    if (a == index_.end() || b == index_.end()) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") names an unknown vertex");
    }
    if (vertices_[a->second].position == vertices_[b->second].position) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") has zero length");
    }
    edge_index_.emplace_back(a->second, b->second);
  }
}

std::size_t LayoutGraph::index_of(VertexId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown vertex id " + std::to_string(id));
  return it->second;
}

}  // namespace readability
