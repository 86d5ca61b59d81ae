#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace khx {

/// Raised for malformed or non-manifold diagram input.
class DiagramError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One crossing of a planar diagram: four arc labels in rotational order,
/// starting at the incoming under-strand. Positions 0 and 2 carry the
/// under-strand, positions 1 and 3 the over-strand.
struct Crossing {
  std::array<int, 4> arcs{};

  friend bool operator==(const Crossing&, const Crossing&) = default;
};

/// Position of one crossing endpoint: crossing index and tuple slot.
struct Slot {
  int crossing = 0;
  int position = 0;

  friend bool operator==(const Slot&, const Slot&) = default;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

/// Combinatorial link diagram. Crossing order fixes the cube axes.
/// Crossingless components are carried as a free-circle count.
class PlanarDiagram {
 public:
  PlanarDiagram() = default;

  /// Validates: every label occurs exactly twice and the 4-valent graph
  /// embeds in the plane with the given rotations.
  PlanarDiagram(std::vector<Crossing> crossings, int free_circles);

  const std::vector<Crossing>& crossings() const noexcept { return crossings_; }
  std::size_t crossing_count() const noexcept { return crossings_.size(); }
  int free_circles() const noexcept { return free_circles_; }

  /// Sorted distinct arc labels.
  const std::vector<int>& arcs() const noexcept { return arcs_; }
  std::size_t arc_index(int label) const;

  /// The other slot carrying the same arc label.
  Slot partner(Slot s) const;

  /// Components: free circles plus the closed strands through crossings.
  int component_count() const noexcept { return strand_components_ + free_circles_; }
  int strand_component_count() const noexcept { return strand_components_; }

  friend bool operator==(const PlanarDiagram& a, const PlanarDiagram& b) {
    return a.crossings_ == b.crossings_ && a.free_circles_ == b.free_circles_;
  }

 private:
  std::vector<Crossing> crossings_;
  int free_circles_ = 0;
  std::vector<int> arcs_;
  // partner slot per (crossing * 4 + position)
  std::vector<Slot> partners_;
  int strand_components_ = 0;
};

/// Result of orienting a diagram. Components through crossings are indexed
/// by increasing lowest arc label.
struct OrientationData {
  /// +1 when the component runs in the default direction, -1 when reversed.
  std::vector<int> directions;
  /// Per crossing: +1 or -1.
  std::vector<int> signs;
  /// Per slot (crossing * 4 + position): true when the strand enters there.
  std::vector<bool> incoming;
  int n_plus = 0;
  int n_minus = 0;
};

PlanarDiagram parse_pd(std::string_view text);
std::string to_pd_string(const PlanarDiagram& d);

/// Any accepted diagram syntax: PD tuples, `P(a,b,c)`, or the JSON form.
PlanarDiagram parse_diagram(std::string_view text);

PlanarDiagram diagram_from_json(std::string_view text);
std::string diagram_to_json(const PlanarDiagram& d);

/// Three twist columns of |p_i| crossings joined top and bottom. Crossings
/// are ordered column by column, top to bottom. A zero column is the
/// horizontal (0) tangle.
PlanarDiagram pretzel(int p1, int p2, int p3);

/// Default orientation: each component starts at its lowest arc label and
/// runs toward the smaller neighbouring label. `reverse[k]` flips component k.
OrientationData orient_and_count(const PlanarDiagram& d, const std::vector<bool>& reverse = {});

/// Swap over and under at every crossing.
PlanarDiagram mirror(const PlanarDiagram& d);

/// D(*0) or D(*1): the diagram with one crossing replaced by its smoothing.
/// Merged arcs take the smallest label of their class; closed loops become
/// free circles.
struct SmoothedDiagram {
  PlanarDiagram diagram;
  /// For each arc index of the result, one original label on that arc.
  std::vector<int> arc_origin;
  /// For each new free circle, one original label on it.
  std::vector<int> circle_origin;
};
SmoothedDiagram smooth_crossing(const PlanarDiagram& d, std::size_t crossing, int smoothing);

/// Arc-label pairs joined by the 0- or 1-smoothing of a crossing.
std::array<std::array<int, 2>, 2> smoothing_pairs(const Crossing& c, int smoothing);

}  // namespace khx
