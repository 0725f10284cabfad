#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "readability/errors.hpp"
#include "readability/graphio.hpp"
#include "readability/metrics_exact.hpp"

namespace {

using namespace readability;

io::EdgeList parse(const std::string& text) {
  std::istringstream in(text);
  return io::parse_edgelist(in, "test");
}

std::string layout_text(const LayoutGraph& g) {
  std::ostringstream out;
  io::write_layout(out, g);
  return out.str();
}

io::EdgeList complete(std::size_t n) {
  io::EdgeList el;
  for (std::size_t i = 0; i < n; ++i) el.vertices.push_back(static_cast<VertexId>(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) el.edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j)});
  }
  return el;
}

// ---------------------------------------------------------------------------
// Edge lists

TEST(ParseEdgelist, CommentsDirectionAndSelfLoops) {
  const auto el = parse("# comment\n0 1\n1 0\n\n2\t2\n3 1\n");
  EXPECT_EQ(el.edges, (std::vector<Edge>{{0, 1}, {1, 3}}));
  EXPECT_EQ(el.vertices, (std::vector<VertexId>{0, 1, 2, 3}));
  EXPECT_EQ(el.stats.duplicates, 1u);
  EXPECT_EQ(el.stats.self_loops, 1u);
}

TEST(ParseEdgelist, MalformedLineNamesLineNumber) {
  for (const std::string bad : {"0 1\n# c\n4 x\n", "0 1\n# c\n4\n", "0 1\n# c\n4 5 6\n", "0 1\n# c\n-4 5\n"}) {
    try {
      parse(bad);
      FAIL() << bad;
    } catch (const InputError& e) {
      EXPECT_NE(std::string(e.what()).find("test:3"), std::string::npos) << e.what();
    }
  }
}

TEST(ParseEdgelist, EmptyInputRejected) {
  EXPECT_THROW(parse(""), InputError);
  EXPECT_THROW(parse("# only a comment\n\n"), InputError);
}

TEST(ParseEdgelist, WriteReadRoundTrip) {
  const auto el = gen::random_graph(30, 60, 5);
  std::ostringstream out;
  io::write_edgelist(out, el);
  const auto back = parse(out.str());
  EXPECT_EQ(back.edges, el.edges);
}

// ---------------------------------------------------------------------------
// Layouts

TEST(Layout, RoundTripIsExactAndIdempotent) {
  const auto g = gen::random_layout(gen::random_graph(50, 80, 6), 37.5, 7);
  const std::string text = layout_text(g);
  std::istringstream in(text);
  const auto vs = io::parse_layout(in, "layout");
  ASSERT_EQ(vs.size(), g.num_vertices());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    EXPECT_EQ(vs[i].id, g.vertices()[i].id);
    EXPECT_EQ(vs[i].position, g.vertices()[i].position);
  }
  const LayoutGraph again(vs, g.edges());
  EXPECT_EQ(layout_text(again), text);
}

TEST(Layout, RejectsBadInput) {
  auto parse_layout = [](const std::string& s) {
    std::istringstream in(s);
    return io::parse_layout(in, "layout");
  };
  EXPECT_THROW(parse_layout("a,b,c\n0,1,2\n"), InputError);
  EXPECT_THROW(parse_layout("id,x,y\n0,1,2\n0,3,4\n"), InputError);
  EXPECT_THROW(parse_layout("id,x,y\n0,nan,2\n"), InputError);
  EXPECT_THROW(parse_layout("id,x,y\n0,1\n"), InputError);
  EXPECT_EQ(parse_layout("id,x,y\n0,1.5,-2\n").at(0).position, (geometry::Point{1.5, -2}));
}

TEST(Assemble, MissingPositionRejectedAndIsolatedKept) {
  const auto el = parse("0 1\n");
  EXPECT_THROW(io::assemble(el, {{0, {0, 0}}}), InputError);
  const auto g = io::assemble(el, {{0, {0, 0}}, {1, {1, 0}}, {7, {5, 5}}});
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_THROW(io::assemble(el, {{0, {2, 2}}, {1, {2, 2}}}), InputError);
}

// ---------------------------------------------------------------------------
// Generators

TEST(RandomGraph, Examples) {
  const auto k4 = gen::random_graph(4, 6, 1);
  EXPECT_EQ(k4.edges, complete(4).edges);
  const auto empty = gen::random_graph(10, 0, 1);
  EXPECT_TRUE(empty.edges.empty());
  EXPECT_EQ(empty.vertices.size(), 10u);
  EXPECT_THROW(gen::random_graph(4, 7, 1), ParameterError);
}

TEST(RandomGraph, SimpleExactSizeAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 5 + seed * 3, m = (n * (n - 1) / 2) * (seed % 5 + 1) / 6;
    const auto a = gen::random_graph(n, m, seed);
    ASSERT_EQ(a.edges.size(), m);
    std::size_t degree_sum = 0;
    for (const auto& e : a.edges) {
      EXPECT_LT(e.u, e.v);
      EXPECT_LT(e.v, static_cast<VertexId>(n));
      degree_sum += 2;
    }
    EXPECT_EQ(degree_sum, 2 * m);
    EXPECT_TRUE(std::is_sorted(a.edges.begin(), a.edges.end()));
    EXPECT_EQ(std::adjacent_find(a.edges.begin(), a.edges.end()), a.edges.end());
    EXPECT_EQ(gen::random_graph(n, m, seed).edges, a.edges);
  }
}

TEST(RandomLayout, WithinExtentAndDeterministic) {
  const auto el = gen::random_graph(200, 300, 2);
  const auto a = gen::random_layout(el, 12.0, 99);
  for (const auto& v : a.vertices()) {
    EXPECT_GE(v.position.x, 0.0);
    EXPECT_LE(v.position.x, 12.0);
    EXPECT_GE(v.position.y, 0.0);
    EXPECT_LE(v.position.y, 12.0);
  }
  EXPECT_EQ(layout_text(gen::random_layout(el, 12.0, 99)), layout_text(a));
  EXPECT_NE(layout_text(gen::random_layout(el, 12.0, 100)), layout_text(a));
}

TEST(FrLayout, ConnectedPairsEndUpCloser) {
  double connected = 0.0, other = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto el = gen::random_graph(40, 60, seed);
    const auto g = gen::fr_layout(el, {}, seed);
    double c = 0.0, o = 0.0;
    std::size_t nc = 0, no = 0;
    std::set<Edge> edges(el.edges.begin(), el.edges.end());
    for (std::size_t i = 0; i < g.num_vertices(); ++i) {
      for (std::size_t j = i + 1; j < g.num_vertices(); ++j) {
        const double d = geometry::distance(g.vertices()[i].position, g.vertices()[j].position);
        if (edges.contains({g.vertices()[i].id, g.vertices()[j].id})) {
          c += d;
          ++nc;
        } else {
          o += d;
          ++no;
        }
      }
    }
    connected += c / static_cast<double>(nc);
    other += o / static_cast<double>(no);
  }
  EXPECT_LT(connected, other);
}

TEST(FrLayout, BoundsDeterminismAndK5Crosses) {
  const auto el = complete(5);
  gen::FrOptions opts;
  opts.extent = 10.0;
  const auto g = gen::fr_layout(el, opts, 3);
  for (const auto& v : g.vertices()) {
    EXPECT_GE(v.position.x, 0.0);
    EXPECT_LE(v.position.x, 10.0);
    EXPECT_GE(v.position.y, 0.0);
    EXPECT_LE(v.position.y, 10.0);
  }
  EXPECT_EQ(layout_text(gen::fr_layout(el, opts, 3)), layout_text(g));
  EXPECT_GE(oracle::edge_crossing(g), 1u);
}

// ---------------------------------------------------------------------------
// Reports

ReadabilityReport sample_report() {
  ReadabilityReport r;
  r.mode = Mode::Enhanced;
  r.threads = 4;
  r.params.radius = 0.25;
  r.params.strip_width = 0.125;
  r.params.orientation = StripOrientation::Both;
  r.node_occlusion = 17;
  r.minimum_angle = 0.1 + 0.2;
  r.edge_crossing = 12345678901ull;
  r.edge_crossing_angle = 2.0 / 3.0;
  r.elapsed = {{"nc", 0.5}, {"ec", 1.25}};
  r.warnings = {"something odd"};
  return r;
}

TEST(Report, RoundTripExactAndCanonical) {
  const auto r = sample_report();
  const std::string text = io::serialize_report(r);
  const auto back = io::parse_report(text);
  EXPECT_EQ(back, r);
  EXPECT_EQ(io::serialize_report(back), text);
  EXPECT_FALSE(back.edge_length_variation.has_value());
  EXPECT_NE(text.find("\"ml\": null"), std::string::npos);
}

TEST(Report, MissingFieldNamed) {
  std::string text = io::serialize_report(sample_report());
  const auto pos = text.find("\"nc\"", text.find("\"metrics\""));
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 4, "\"zz\"");
  try {
    io::parse_report(text);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("metrics.nc"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::parse_report("not json"), SchemaError);
  EXPECT_THROW(io::parse_report("{}"), SchemaError);
}

TEST(Report, NonFiniteRejected) {
  auto r = sample_report();
  r.minimum_angle = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(io::serialize_report(r), InvariantError);
  r.minimum_angle = std::numeric_limits<double>::infinity();
  EXPECT_THROW(io::serialize_report(r), InvariantError);
}

}  // namespace
