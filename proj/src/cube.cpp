#include "khx/cube.hpp"

#include <algorithm>
#include <sstream>

#include "khx/disjoint_set.hpp"

namespace khx {

std::string Vertex::to_string() const {
  std::string s(static_cast<std::size_t>(size), '0');
  for (int k = 0; k < size; ++k) s[k] = bit(k) ? '1' : '0';
  return s;
}

bool vertex_less(Vertex a, Vertex b) noexcept {
  for (int k = 0; k < a.size && k < b.size; ++k) {
    if (a.bit(k) != b.bit(k)) return a.bit(k) < b.bit(k);
  }
  return a.size < b.size;
}

ResolvedState resolve(const PlanarDiagram& d, Vertex v) {
  if (static_cast<std::size_t>(v.size) != d.crossing_count()) {
    throw std::invalid_argument("vertex length does not match crossing count");
  }
  const auto& arcs = d.arcs();
  DisjointSet circles(arcs.size());
  std::vector<std::array<std::array<std::size_t, 2>, 2>> pairs(d.crossing_count());
  for (std::size_t c = 0; c < d.crossing_count(); ++c) {
    auto p = smoothing_pairs(d.crossings()[c], v.bit(static_cast<int>(c)));
    for (int k = 0; k < 2; ++k) {
      pairs[c][k] = {d.arc_index(p[k][0]), d.arc_index(p[k][1])};
      circles.join(pairs[c][k][0], pairs[c][k][1]);
    }
  }

  ResolvedState s;
  s.vertex = v;
  s.arc_circle.assign(arcs.size(), -1);
  std::vector<int> root_circle(arcs.size(), -1);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    std::size_t root = circles.find(a);
    if (root_circle[root] < 0) {
      root_circle[root] = static_cast<int>(s.circle_arc.size());
      s.circle_arc.push_back(static_cast<int>(a));
    }
    s.arc_circle[a] = root_circle[root];
  }
  for (int k = 0; k < d.free_circles(); ++k) s.circle_arc.push_back(-1);
  s.circle_count = static_cast<int>(s.circle_arc.size());

  s.corner_map.resize(d.crossing_count());
  for (std::size_t c = 0; c < d.crossing_count(); ++c) {
    s.corner_map[c] = {s.arc_circle[pairs[c][0][0]], s.arc_circle[pairs[c][1][0]]};
  }
  return s;
}

int edge_sign(Vertex v, int axis) {
  if (axis < 0 || axis >= v.size) throw std::out_of_range("edge axis out of range");
  if (v.bit(axis)) throw std::invalid_argument("edge axis is already 1-smoothed");
  std::uint32_t before = v.bits & ((std::uint32_t{1} << axis) - 1);
  return (std::popcount(before) % 2 == 0) ? 1 : -1;
}

CubeEdge classify_edge(const ResolvedState& from, const ResolvedState& to, int axis) {
  CubeEdge e;
  e.from = from.vertex;
  e.axis = axis;
  e.sign = edge_sign(from.vertex, axis);

  const auto [a, b] = from.corner_map[axis];
  const auto [ta, tb] = to.corner_map[axis];
  if (a != b) {
    e.kind = EdgeKind::Merge;
    e.sources = {std::min(a, b), std::max(a, b)};
    e.targets = {ta, -1};
  } else {
    e.kind = EdgeKind::Split;
    e.sources = {a, -1};
    e.targets = {std::min(ta, tb), std::max(ta, tb)};
  }

  const int free_circles = from.circle_count - static_cast<int>(std::count_if(from.circle_arc.begin(), from.circle_arc.end(), [](int x) { return x >= 0; }));
  const int from_strand = from.circle_count - free_circles;
  const int to_strand = to.circle_count - free_circles;
  e.carry.assign(static_cast<std::size_t>(from.circle_count), -1);
  for (int c = 0; c < from.circle_count; ++c) {
    if (c == e.sources[0] || c == e.sources[1]) continue;
    e.carry[c] = c < from_strand ? to.arc_circle[from.circle_arc[c]] : to_strand + (c - from_strand);
  }
  return e;
}

void check_cube_limit(const PlanarDiagram& d, std::size_t limit) {
  if (d.crossing_count() > limit) {
    throw ResourceLimitError("diagram has " + std::to_string(d.crossing_count()) + " crossings, cube limit is " +
                             std::to_string(limit));
  }
  if (d.crossing_count() > 30) throw ResourceLimitError("cube vertices are limited to 30 crossings");
}

ResolutionCube build_cube(const PlanarDiagram& d, std::size_t limit) {
  check_cube_limit(d, limit);
  const int n = static_cast<int>(d.crossing_count());
  const std::uint32_t count = std::uint32_t{1} << n;
  ResolutionCube cube;
  cube.crossings = d.crossing_count();
  cube.states.reserve(count);
  for (std::uint32_t bits = 0; bits < count; ++bits) cube.states.push_back(resolve(d, {bits, n}));
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    for (int k = 0; k < n; ++k) {
      if ((bits >> k) & 1u) continue;
      cube.edges.push_back(classify_edge(cube.states[bits], cube.states[bits | (1u << k)], k));
    }
  }
  return cube;
}

std::string dump_cube(const ResolutionCube& cube) {
  std::ostringstream out;
  for (const auto& s : cube.states) {
    out << s.vertex.to_string() << ' ' << s.vertex.weight() << ' ' << s.circle_count << '\n';
  }
  for (const auto& e : cube.edges) {
    out << e.from.to_string() << ' ' << e.axis << ' ' << (e.kind == EdgeKind::Merge ? 'm' : 'D') << ' '
        << (e.sign > 0 ? "+1" : "-1") << '\n';
  }
  return out.str();
}

}  // namespace khx
