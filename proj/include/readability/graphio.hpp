#pragma once

// Edge-list and layout files, layout generators and report documents.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "readability/layout_graph.hpp"
#include "readability/report.hpp"

namespace readability::io {

// Graph topology without positions. Edges are normalized and unique;
// vertices are sorted.
struct EdgeList {
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;
  IngestStats stats;
};

// SNAP-style text: one "u v" pair of nonnegative integers per line, '#'
// lines and blank lines ignored. Directed input is read as undirected.
// Throws InputError (with the line number) on malformed lines and when the
// input holds no edge lines at all.
EdgeList parse_edgelist(std::istream& in, std::string_view source = "<input>");
EdgeList read_edgelist(const std::filesystem::path& path);
void write_edgelist(std::ostream& out, const EdgeList& edges);
void write_edgelist(const std::filesystem::path& path, const EdgeList& edges);

// CSV with header "id,x,y". Coordinates are written in shortest
// round-trip form.
std::vector<Vertex> parse_layout(std::istream& in, std::string_view source = "<input>");
std::vector<Vertex> read_layout(const std::filesystem::path& path);
void write_layout(std::ostream& out, const LayoutGraph& g);
void write_layout(const std::filesystem::path& path, const LayoutGraph& g);

// Joins topology and positions. Every vertex of the edge list needs a
// position; positioned vertices without edges are kept.
LayoutGraph assemble(const EdgeList& edges, std::vector<Vertex> positions);

// Canonical JSON (sorted keys). Non-finite metrics are rejected.
std::string serialize_report(const ReadabilityReport& report);
// Throws SchemaError naming the first missing or mistyped field.
ReadabilityReport parse_report(std::string_view json);
void write_report(const std::filesystem::path& path, const ReadabilityReport& report);
ReadabilityReport read_report(const std::filesystem::path& path);

}  // namespace readability::io

namespace readability::gen {

// Uniform simple graph on vertices 0..n-1 with exactly m edges.
// Throws ParameterError if m > n(n-1)/2.
io::EdgeList random_graph(std::size_t n, std::size_t m, std::uint64_t seed);

// Independent uniform positions in [0, extent]^2.
LayoutGraph random_layout(const io::EdgeList& edges, double extent, std::uint64_t seed);

struct FrOptions {
  int iterations = 50;
  double extent = 100.0;
  double cooling = 0.95;  // temperature multiplier per iteration
};

// Fruchterman-Reingold from a seeded random start: repulsion k^2/d between
// all pairs, attraction d^2/k along edges, k = extent / sqrt(n), initial
// temperature extent / 10. The result is scaled uniformly into [0, extent]^2.
LayoutGraph fr_layout(const io::EdgeList& edges, const FrOptions& options, std::uint64_t seed);

}  // namespace readability::gen
