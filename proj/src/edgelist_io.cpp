#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "readability/errors.hpp"
#include "readability/graphio.hpp"

namespace readability::io {

namespace {

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split(std::string_view s, std::string_view delims) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto b = s.find_first_not_of(delims, pos);
    if (b == std::string_view::npos) break;
    const auto e = s.find_first_of(delims, b);
    tokens.push_back(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
    pos = e == std::string_view::npos ? s.size() : e;
  }
  return tokens;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

EdgeList parse_edgelist(std::istream& in, std::string_view source) {
  std::vector<Edge> raw;
  std::size_t data_lines = 0;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    ++data_lines;
    const auto tokens = split(text, " \t");
    VertexId u = 0, v = 0;
    if (tokens.size() != 2 || !parse_number(tokens[0], u) || !parse_number(tokens[1], v)) {
      throw InputError(where(source, number) + "expected two integer vertex ids, got '" + std::string(text) + "'");
    }
    if (u < 0 || v < 0) throw InputError(where(source, number) + "vertex ids must be nonnegative");
    raw.push_back({u, v});
  }
  if (data_lines == 0) throw InputError(std::string(source) + ": edge list is empty");

  EdgeList list;
  list.edges = normalize_edges(raw, &list.stats);
  for (const Edge& e : raw) {
    list.vertices.push_back(e.u);
    list.vertices.push_back(e.v);
  }
  std::sort(list.vertices.begin(), list.vertices.end());
  list.vertices.erase(std::unique(list.vertices.begin(), list.vertices.end()), list.vertices.end());
  return list;
}

EdgeList read_edgelist(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_edgelist(in, path.string());
}

void write_edgelist(std::ostream& out, const EdgeList& edges) {
  out << "# undirected edge list: " << edges.vertices.size() << " vertices, " << edges.edges.size() << " edges\n";
  for (const Edge& e : edges.edges) out << e.u << ' ' << e.v << '\n';
}

void write_edgelist(const std::filesystem::path& path, const EdgeList& edges) {
  auto out = open_out(path);
  write_edgelist(out, edges);
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

std::vector<Vertex> parse_layout(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t number = 1;
  for (; std::getline(in, line); ++number) {
    if (!trim(line).empty()) break;
  }
  if (trim(line) != "id,x,y") throw InputError(where(source, number) + "expected header 'id,x,y'");

  std::vector<Vertex> vertices;
  std::unordered_set<VertexId> seen;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text, ",");
    Vertex v;
    if (fields.size() != 3 || !parse_number(trim(fields[0]), v.id) || !parse_number(trim(fields[1]), v.position.x) ||
        !parse_number(trim(fields[2]), v.position.y)) {
      throw InputError(where(source, number) + "expected 'id,x,y', got '" + std::string(text) + "'");
    }
    if (!geometry::is_finite(v.position)) throw InputError(where(source, number) + "non-finite coordinate");
    if (!seen.insert(v.id).second) throw InputError(where(source, number) + "duplicate id " + std::to_string(v.id));
    vertices.push_back(v);
  }
  return vertices;
}

std::vector<Vertex> read_layout(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_layout(in, path.string());
}

void write_layout(std::ostream& out, const LayoutGraph& g) {
  out << "id,x,y\n";
  for (const auto& v : g.vertices()) {
    out << v.id << ',' << format_double(v.position.x) << ',' << format_double(v.position.y) << '\n';
  }
}

void write_layout(const std::filesystem::path& path, const LayoutGraph& g) {
  auto out = open_out(path);
  write_layout(out, g);
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

LayoutGraph assemble(const EdgeList& edges, std::vector<Vertex> positions) {
  std::unordered_set<VertexId> placed;
  for (const auto& v : positions) placed.insert(v.id);
  for (VertexId id : edges.vertices) {
    if (!placed.contains(id)) throw InputError("layout has no position for vertex " + std::to_string(id));
  }
  LayoutGraph g(std::move(positions), edges.edges);
  return g;
}

}  // namespace readability::io
