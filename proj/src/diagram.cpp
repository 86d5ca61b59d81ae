#include "khx/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "khx/disjoint_set.hpp"

namespace khx {

namespace {

constexpr std::size_t slot_key(Slot s) { return static_cast<std::size_t>(s.crossing) * 4 + s.position; }

int count_faces(const std::vector<Crossing>& crossings, const std::vector<Slot>& partners) {
  std::vector<bool> seen(crossings.size() * 4, false);
  int faces = 0;
  for (std::size_t start = 0; start < seen.size(); ++start) {
    if (seen[start]) continue;
    ++faces;
    std::size_t dart = start;
    while (!seen[dart]) {
      seen[dart] = true;
      Slot arrive = partners[dart];
      dart = slot_key({arrive.crossing, (arrive.position + 1) % 4});
    }
  }
  return faces;
}

}  // namespace

PlanarDiagram::PlanarDiagram(std::vector<Crossing> crossings, int free_circles)
    : crossings_(std::move(crossings)), free_circles_(free_circles) {
  if (free_circles_ < 0) throw DiagramError("negative free circle count");
  if (crossings_.empty() && free_circles_ == 0) throw DiagramError("empty diagram");

  std::map<int, std::vector<Slot>> occurrences;
  for (std::size_t c = 0; c < crossings_.size(); ++c) {
    for (int k = 0; k < 4; ++k) occurrences[crossings_[c].arcs[k]].push_back({static_cast<int>(c), k});
  }
  partners_.resize(crossings_.size() * 4);
  arcs_.reserve(occurrences.size());
  for (const auto& [label, slots] : occurrences) {
    if (slots.size() != 2) {
      throw DiagramError("arc label " + std::to_string(label) + " occurs " + std::to_string(slots.size()) +
                         " times, expected 2");
    }
    arcs_.push_back(label);
    partners_[slot_key(slots[0])] = slots[1];
    partners_[slot_key(slots[1])] = slots[0];
  }

  // Strand components: labels joined straight through each crossing.
  DisjointSet strands(arcs_.size());
  DisjointSet projection(crossings_.size());
  for (std::size_t c = 0; c < crossings_.size(); ++c) {
    const auto& a = crossings_[c].arcs;
    strands.join(arc_index(a[0]), arc_index(a[2]));
    strands.join(arc_index(a[1]), arc_index(a[3]));
    for (int k = 0; k < 4; ++k) projection.join(c, static_cast<std::size_t>(partners_[c * 4 + k].crossing));
  }
  strand_components_ = static_cast<int>(strands.set_count());

  // Each connected piece of the projection must be a sphere: F = V + 2.
  int expected_faces = static_cast<int>(crossings_.size()) + 2 * static_cast<int>(projection.set_count());
  if (count_faces(crossings_, partners_) != expected_faces) {
    throw DiagramError("crossing rotations do not describe a planar diagram");
  }
}

std::size_t PlanarDiagram::arc_index(int label) const {
  auto it = std::lower_bound(arcs_.begin(), arcs_.end(), label);
  if (it == arcs_.end() || *it != label) throw DiagramError("unknown arc label " + std::to_string(label));
  return static_cast<std::size_t>(it - arcs_.begin());
}

Slot PlanarDiagram::partner(Slot s) const { return partners_.at(slot_key(s)); }

// ---------------------------------------------------------------------------
// Text formats

namespace {

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_word(std::string_view w) {
    skip_space();
    if (text_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  int integer() {
    skip_space();
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first < last && *first == '+') ++first;
    int value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) fail("expected integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw DiagramError("PD parse error at offset " + std::to_string(pos_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

PlanarDiagram parse_pd(std::string_view text) {
  Scanner in(text);
  bool wrapped = in.accept_word("PD[");
  std::vector<Crossing> crossings;
  int circles = 0;
  bool first = true;
  while (!in.done()) {
    if (wrapped && in.accept(']')) {
      if (!in.done()) in.fail("trailing input after PD[...]");
      wrapped = false;
      break;
    }
    if (!first) in.expect(',');
    first = false;
    if (in.accept('O')) {
      ++circles;
      continue;
    }
    if (!in.accept('X')) in.fail("expected X[...] or O");
    in.expect('[');
    std::vector<int> labels;
    labels.push_back(in.integer());
    while (in.accept(',')) labels.push_back(in.integer());
    in.expect(']');
    if (labels.size() != 4) {
      in.fail("crossing tuple has " + std::to_string(labels.size()) + " labels, expected 4");
    }
    crossings.push_back({{labels[0], labels[1], labels[2], labels[3]}});
  }
  if (wrapped) in.fail("unterminated PD[");
  return PlanarDiagram(std::move(crossings), circles);
}

std::string to_pd_string(const PlanarDiagram& d) {
  std::ostringstream out;
  bool first = true;
  for (const auto& c : d.crossings()) {
    if (!first) out << ',';
    first = false;
    out << "X[" << c.arcs[0] << ',' << c.arcs[1] << ',' << c.arcs[2] << ',' << c.arcs[3] << ']';
  }
  for (int k = 0; k < d.free_circles(); ++k) {
    if (!first) out << ',';
    first = false;
    out << 'O';
  }
  return out.str();
}

PlanarDiagram diagram_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DiagramError(std::string("diagram JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("crossings")) throw DiagramError("diagram JSON needs a \"crossings\" array");
  std::vector<Crossing> crossings;
  try {
    for (const auto& t : j.at("crossings")) {
      if (!t.is_array() || t.size() != 4) throw DiagramError("diagram JSON: crossing tuple arity must be 4");
      crossings.push_back({{t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<int>()}});
    }
    int circles = j.value("circles", 0);
    return PlanarDiagram(std::move(crossings), circles);
  } catch (const nlohmann::json::exception& e) {
    throw DiagramError(std::string("diagram JSON: ") + e.what());
  }
}

std::string diagram_to_json(const PlanarDiagram& d) {
  nlohmann::json j;
  j["crossings"] = nlohmann::json::array();
  for (const auto& c : d.crossings()) j["crossings"].push_back(c.arcs);
  j["circles"] = d.free_circles();
  return j.dump();
}

PlanarDiagram parse_diagram(std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '{') return diagram_from_json(t);
  if (t.size() >= 2 && t[0] == 'P' && t[1] == '(') {
    Scanner in(t.substr(1));
    in.expect('(');
    int a = in.integer();
    in.expect(',');
    int b = in.integer();
    in.expect(',');
    int c = in.integer();
    in.expect(')');
    if (!in.done()) in.fail("trailing input after pretzel triple");
    return pretzel(a, b, c);
  }
  return parse_pd(t);
}

// ---------------------------------------------------------------------------
// Pretzel generator

PlanarDiagram pretzel(int p1, int p2, int p3) {
  const std::array<int, 3> twists{p1, p2, p3};
  if (p1 == 0 && p2 == 0 && p3 == 0) throw DiagramError("pretzel: all twist counts are zero");

  // Corner order at a crossing, counterclockwise: BL, BR, TR, TL.
  enum Corner { BL = 0, BR = 1, TR = 2, TL = 3 };
  int n = 0;
  std::array<int, 3> first{};
  for (int i = 0; i < 3; ++i) {
    first[i] = n;
    n += std::abs(twists[i]);
  }
  const int corner_nodes = 4 * n;
  // Column ends: TL, TR, BL, BR per column, after the crossing corners.
  auto end_node = [&](int column, Corner c) { return corner_nodes + 4 * column + c; };
  const int node_count = corner_nodes + 12;
  std::vector<std::vector<int>> adj(node_count);
  auto link = [&](int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  auto corner = [](int crossing, Corner c) { return 4 * crossing + c; };

  for (int i = 0; i < 3; ++i) {
    const int m = std::abs(twists[i]);
    if (m == 0) {
      link(end_node(i, TL), end_node(i, TR));
      link(end_node(i, BL), end_node(i, BR));
      continue;
    }
    const int top = first[i];
    const int bottom = first[i] + m - 1;
    link(end_node(i, TL), corner(top, TL));
    link(end_node(i, TR), corner(top, TR));
    for (int k = top; k < bottom; ++k) {
      link(corner(k, BL), corner(k + 1, TL));
      link(corner(k, BR), corner(k + 1, TR));
    }
    link(corner(bottom, BL), end_node(i, BL));
    link(corner(bottom, BR), end_node(i, BR));
  }
  for (int i = 0; i < 3; ++i) {
    const int next = (i + 1) % 3;
    link(end_node(i, TR), end_node(next, TL));
    link(end_node(i, BR), end_node(next, BL));
  }

  // Reduce paths through column ends to corner-to-corner arcs.
  std::vector<int> other_end(corner_nodes, -1);
  for (int start = 0; start < corner_nodes; ++start) {
    int prev = start;
    int cur = adj[start].front();
    while (cur >= corner_nodes) {
      int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
      prev = cur;
      cur = next;
    }
    other_end[start] = cur;
  }

  // Label arcs consecutively along each strand.
  std::vector<int> label(corner_nodes, 0);
  std::vector<bool> incoming(corner_nodes, false);
  int next_label = 1;
  for (int start = 0; start < corner_nodes; ++start) {
    if (label[start] != 0) continue;
    int leave = start;
    do {
      int arrive = other_end[leave];
      label[leave] = label[arrive] = next_label++;
      incoming[arrive] = true;
      leave = 4 * (arrive / 4) + (arrive % 4 + 2) % 4;
    } while (leave != start);
  }

  std::vector<Crossing> crossings(n);
  for (int i = 0; i < 3; ++i) {
    // Positive handedness puts the BR-TL strand under.
    const int under_a = twists[i] > 0 ? BR : BL;
    for (int k = first[i]; k < first[i] + std::abs(twists[i]); ++k) {
      int u_in = incoming[corner(k, static_cast<Corner>(under_a))] ? under_a : (under_a + 2) % 4;
      for (int j = 0; j < 4; ++j) crossings[k].arcs[j] = label[4 * k + (u_in + j) % 4];
    }
  }
  return PlanarDiagram(std::move(crossings), 0);
}

// ---------------------------------------------------------------------------
// Orientation

OrientationData orient_and_count(const PlanarDiagram& d, const std::vector<bool>& reverse) {
  const auto& xs = d.crossings();
  const std::size_t slots = xs.size() * 4;
  auto label_at = [&](Slot s) { return xs[s.crossing].arcs[s.position]; };
  auto opposite = [](Slot s) { return Slot{s.crossing, (s.position + 2) % 4}; };

  std::vector<std::vector<Slot>> arc_slots(d.arcs().size());
  for (std::size_t c = 0; c < xs.size(); ++c) {
    for (int k = 0; k < 4; ++k) arc_slots[d.arc_index(xs[c].arcs[k])].push_back({static_cast<int>(c), k});
  }

  OrientationData out;
  out.incoming.assign(slots, false);
  std::vector<bool> done(d.arcs().size(), false);
  std::size_t component = 0;
  for (std::size_t a = 0; a < d.arcs().size(); ++a) {
    if (done[a]) continue;
    Slot s1 = arc_slots[a][0];
    Slot s2 = arc_slots[a][1];
    int next1 = label_at(opposite(s1));
    int next2 = label_at(opposite(s2));
    Slot enter = next2 < next1 ? s2 : s1;
    bool flip = component < reverse.size() && reverse[component];
    if (flip) enter = enter == s1 ? s2 : s1;
    out.directions.push_back(flip ? -1 : 1);
    ++component;

    Slot cur = enter;
    while (true) {
      out.incoming[slot_key(cur)] = true;
      done[d.arc_index(label_at(cur))] = true;
      Slot leave = opposite(cur);
      done[d.arc_index(label_at(leave))] = true;
      cur = d.partner(leave);
      if (cur == enter) break;
    }
  }
  if (reverse.size() > component) throw DiagramError("orientation override names more components than the diagram has");

  out.signs.resize(xs.size());
  for (std::size_t c = 0; c < xs.size(); ++c) {
    int under_in = out.incoming[c * 4 + 0] ? 0 : 2;
    int over_out = out.incoming[c * 4 + 1] ? 3 : 1;
    int sign = ((over_out - under_in + 4) % 4 == 3) ? 1 : -1;
    out.signs[c] = sign;
    (sign > 0 ? out.n_plus : out.n_minus) += 1;
  }
  return out;
}

PlanarDiagram mirror(const PlanarDiagram& d) {
  std::vector<Crossing> xs = d.crossings();
  for (auto& c : xs) std::rotate(c.arcs.begin(), c.arcs.begin() + 1, c.arcs.end());
  return PlanarDiagram(std::move(xs), d.free_circles());
}

// ---------------------------------------------------------------------------
// Single-crossing smoothing

std::array<std::array<int, 2>, 2> smoothing_pairs(const Crossing& c, int smoothing) {
  const auto& x = c.arcs;
  if (smoothing == 0) return {{{x[0], x[3]}, {x[1], x[2]}}};
  return {{{x[0], x[1]}, {x[2], x[3]}}};
}

SmoothedDiagram smooth_crossing(const PlanarDiagram& d, std::size_t crossing, int smoothing) {
  if (crossing >= d.crossing_count()) throw DiagramError("crossing index out of range");
  if (smoothing != 0 && smoothing != 1) throw DiagramError("smoothing must be 0 or 1");

  DisjointSet classes(d.arcs().size());
  for (const auto& pair : smoothing_pairs(d.crossings()[crossing], smoothing)) {
    classes.join(d.arc_index(pair[0]), d.arc_index(pair[1]));
  }
  // Smallest label per class (arcs() is sorted, so the first seen is smallest).
  std::vector<int> class_label(d.arcs().size(), 0);
  std::vector<bool> class_seen(d.arcs().size(), false);
  for (std::size_t a = 0; a < d.arcs().size(); ++a) {
    std::size_t root = classes.find(a);
    if (!class_seen[root]) {
      class_seen[root] = true;
      class_label[root] = d.arcs()[a];
    }
  }

  std::vector<Crossing> rest;
  std::vector<bool> class_used(d.arcs().size(), false);
  for (std::size_t c = 0; c < d.crossing_count(); ++c) {
    if (c == crossing) continue;
    Crossing x = d.crossings()[c];
    for (int& label : x.arcs) {
      std::size_t root = classes.find(d.arc_index(label));
      class_used[root] = true;
      label = class_label[root];
    }
    rest.push_back(x);
  }

  SmoothedDiagram out;
  int circles = d.free_circles();
  for (std::size_t a = 0; a < d.arcs().size(); ++a) {
    if (classes.find(a) == a && !class_used[a]) {
      ++circles;
      out.circle_origin.push_back(class_label[a]);
    }
  }
  out.diagram = PlanarDiagram(std::move(rest), circles);
  out.arc_origin = out.diagram.arcs();
  return out;
}

}  // namespace khx
