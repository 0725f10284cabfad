#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "readability/errors.hpp"
#include "readability/graphio.hpp"

namespace readability::gen {

namespace {

// mt19937_64 output is fully specified by the standard; the conversions
// below are ours, so generated layouts do not depend on the library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // [0, n), n > 0
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<Vertex> random_positions(const std::vector<VertexId>& ids, double extent, Rng& rng) {
  std::vector<Vertex> out;
  out.reserve(ids.size());
  for (VertexId id : ids) {
    const double x = rng.uniform() * extent;
    const double y = rng.uniform() * extent;
    out.push_back({id, {x, y}});
  }
  return out;
}

}  // namespace

io::EdgeList random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  const std::uint64_t total = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m > total) {
    throw ParameterError("cannot place " + std::to_string(m) + " edges on " + std::to_string(n) + " vertices");
  }
  Rng rng(seed);
  io::EdgeList list;
  list.vertices.resize(n);
  for (std::size_t i = 0; i < n; ++i) list.vertices[i] = static_cast<VertexId>(i);

  auto key = [n](std::uint64_t a, std::uint64_t b) { return std::min(a, b) * n + std::max(a, b); };
  auto draw = [&](std::size_t count) {
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(count * 2);
    while (chosen.size() < count) {
      const auto a = rng.below(n);
      const auto b = rng.below(n);
      if (a != b) chosen.insert(key(a, b));
    }
    return chosen;
  };

  if (m <= total / 2) {
    for (auto k : draw(m)) {
      list.edges.push_back({static_cast<VertexId>(k / n), static_cast<VertexId>(k % n)});
    }
  } else {
    // Dense: draw the complement instead.
    const auto excluded = draw(static_cast<std::size_t>(total - m));
    for (std::uint64_t a = 0; a < n; ++a) {
      for (std::uint64_t b = a + 1; b < n; ++b) {
        if (!excluded.contains(key(a, b))) list.edges.push_back({static_cast<VertexId>(a), static_cast<VertexId>(b)});
      }
    }
  }
  std::sort(list.edges.begin(), list.edges.end());
  return list;
}

LayoutGraph random_layout(const io::EdgeList& edges, double extent, std::uint64_t seed) {
  if (!(extent > 0.0) || !std::isfinite(extent)) throw ParameterError("extent must be finite and positive");
  Rng rng(seed);
  return io::assemble(edges, random_positions(edges.vertices, extent, rng));
}

LayoutGraph fr_layout(const io::EdgeList& edges, const FrOptions& options, std::uint64_t seed) {
  if (options.iterations < 1) throw ParameterError("FR needs at least one iteration");
  if (!(options.extent > 0.0) || !std::isfinite(options.extent)) throw ParameterError("extent must be finite and positive");
  const double extent = options.extent;
  Rng rng(seed);
  std::vector<Vertex> verts = random_positions(edges.vertices, extent, rng);
  const std::size_t n = verts.size();
  if (n == 0) return io::assemble(edges, std::move(verts));

  std::unordered_map<VertexId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(verts[i].id, i);
  std::vector<std::pair<std::size_t, std::size_t>> links;
  links.reserve(edges.edges.size());
  for (const Edge& e : edges.edges) links.emplace_back(index.at(e.u), index.at(e.v));

  std::vector<double> x(n), y(n), dx(n), dy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = verts[i].position.x;
    y[i] = verts[i].position.y;
  }
  const double k = extent / std::sqrt(static_cast<double>(n));
  const double k2 = k * k;
  const double min_dist = 1e-9 * extent;
  double temperature = extent / 10.0;

  for (int it = 0; it < options.iterations; ++it) {
    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dy.begin(), dy.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double ddx = x[i] - x[j];
        double ddy = y[i] - y[j];
        double d2 = ddx * ddx + ddy * ddy;
        if (d2 < min_dist * min_dist) {
          ddx = min_dist;
          ddy = 0.0;
          d2 = min_dist * min_dist;
        }
        // (delta / d) * (k^2 / d)
        const double f = k2 / d2;
        dx[i] += ddx * f;
        dy[i] += ddy * f;
        dx[j] -= ddx * f;
        dy[j] -= ddy * f;
      }
    }
    for (const auto& [a, b] : links) {
      const double ddx = x[a] - x[b];
      const double ddy = y[a] - y[b];
      // (delta / d) * (d^2 / k)
      const double d = std::sqrt(ddx * ddx + ddy * ddy);
      const double f = d / k;
      dx[a] -= ddx * f;
      dy[a] -= ddy * f;
      dx[b] += ddx * f;
      dy[b] += ddy * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double len = std::sqrt(dx[i] * dx[i] + dy[i] * dy[i]);
      if (len == 0.0) continue;
      const double step = std::min(len, temperature) / len;
      x[i] += dx[i] * step;
      y[i] += dy[i] * step;
    }
    temperature *= options.cooling;
  }

  const auto [x_lo, x_hi] = std::minmax_element(x.begin(), x.end());
  const auto [y_lo, y_hi] = std::minmax_element(y.begin(), y.end());
  const double span = std::max(*x_hi - *x_lo, *y_hi - *y_lo);
  const double x0 = *x_lo, y0 = *y_lo;
  for (std::size_t i = 0; i < n; ++i) {
    if (span > 0.0) {
      verts[i].position = {std::clamp((x[i] - x0) * (extent / span), 0.0, extent),
                           std::clamp((y[i] - y0) * (extent / span), 0.0, extent)};
    } else {
      verts[i].position = {extent / 2, extent / 2};
    }
  }
  return io::assemble(edges, std::move(verts));
}

}  // namespace readability::gen
