#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "khx/diagram.hpp"

namespace khx {

/// Refuses work whose size would exceed a configured guard.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_cube_limit = 20;

/// A vertex of the n-cube: bit k is the smoothing chosen at crossing k.
struct Vertex {
  std::uint32_t bits = 0;
  int size = 0;

  int weight() const noexcept { return std::popcount(bits); }
  int bit(int k) const noexcept { return static_cast<int>((bits >> k) & 1u); }
  /// "x0 x1 ... x(n-1)" written without separators.
  std::string to_string() const;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Lexicographic order on the tuple (x0, ..., x(n-1)).
bool vertex_less(Vertex a, Vertex b) noexcept;

/// A total smoothing. Circles are numbered by their smallest arc index;
/// the diagram's free circles come last.
struct ResolvedState {
  Vertex vertex;
  int circle_count = 0;
  /// Circle id per arc index.
  std::vector<int> arc_circle;
  /// Smallest arc index on each strand circle, -1 for free circles.
  std::vector<int> circle_arc;
  /// Per crossing: circles through the two smoothing arcs at that crossing.
  std::vector<std::array<int, 2>> corner_map;
};

enum class EdgeKind { Merge, Split };

/// 0 -> 1 change at one crossing.
struct CubeEdge {
  Vertex from;
  int axis = 0;
  EdgeKind kind = EdgeKind::Merge;
  int sign = 1;
  /// Merge: the two source circles (ascending). Split: {source, -1}.
  std::array<int, 2> sources{};
  /// Merge: {target, -1}. Split: the two target circles (ascending).
  std::array<int, 2> targets{};
  /// Target circle for every source circle away from the crossing; -1 for involved circles.
  std::vector<int> carry;
};

struct ResolutionCube {
  std::size_t crossings = 0;
  /// Indexed by vertex bits.
  std::vector<ResolvedState> states;
  std::vector<CubeEdge> edges;
};

ResolvedState resolve(const PlanarDiagram& d, Vertex v);

/// `to` must be `from` with bit `axis` raised.
CubeEdge classify_edge(const ResolvedState& from, const ResolvedState& to, int axis);

/// (-1)^(number of 1-bits of v before axis). Throws when bit `axis` is already 1.
int edge_sign(Vertex v, int axis);

/// Throws ResourceLimitError when the crossing count exceeds `limit`.
void check_cube_limit(const PlanarDiagram& d, std::size_t limit);

ResolutionCube build_cube(const PlanarDiagram& d, std::size_t limit = default_cube_limit);

/// One line per vertex `bits weight circle_count`, then one per edge
/// `bits axis kind sign`.
std::string dump_cube(const ResolutionCube& cube);

}  // namespace khx
