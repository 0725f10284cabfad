#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "readability/geometry.hpp"

namespace readability {

using VertexId = std::int64_t;

struct Vertex {
  VertexId id = 0;
  geometry::Point position;
};

// Undirected edge; normalized edges have u < v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  Edge normalized() const { return u <= v ? *this : Edge{v, u}; }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// What was dropped while normalizing an edge list.
struct IngestStats {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

// Normalizes (u < v), drops self-loops and duplicate undirected edges, and
// returns edges sorted lexicographically. Counts go to `stats` if given.
std::vector<Edge> normalize_edges(std::span<const Edge> edges, IngestStats* stats = nullptr);

// Vertices with 2-D positions plus a normalized, duplicate-free undirected
// edge list. Vertices are stored sorted by id.
class LayoutGraph {
 public:
  LayoutGraph() = default;

  // Throws InputError on duplicate vertex ids, non-finite coordinates,
  // edges naming unknown vertices, or edges whose endpoints coincide.
  LayoutGraph(std::vector<Vertex> vertices, std::span<const Edge> edges);

  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const IngestStats& ingest_stats() const { return stats_; }

  // Index into vertices() of the endpoints of edge i.
  std::pair<std::size_t, std::size_t> edge_endpoints(std::size_t i) const { return edge_index_[i]; }
  geometry::Segment segment(std::size_t i) const {
    const auto [a, b] = edge_index_[i];
    return {vertices_[a].position, vertices_[b].position};
  }

  bool contains(VertexId id) const { return index_.contains(id); }
  std::size_t index_of(VertexId id) const;
  const geometry::Point& position(VertexId id) const { return vertices_[index_of(id)].position; }

  // Same topology with every position mapped through fn.
  template <typename F>
  LayoutGraph transformed(F&& fn) const {
    std::vector<Vertex> moved(vertices_);
    for (auto& v : moved) v.position = fn(v.position);
    return LayoutGraph(std::move(moved), edges_);
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::pair<std::size_t, std::size_t>> edge_index_;
  std::unordered_map<VertexId, std::size_t> index_;
  IngestStats stats_;
};

}  // namespace readability
