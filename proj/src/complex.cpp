#include "khx/complex.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace khx {

FrobeniusTheory FrobeniusTheory::khovanov(Ring ring) {
  FrobeniusTheory t;
  t.name_ = Theory::Khovanov;
  t.ring_ = ring;
  t.mult_[0] = {{0, 0, 1}};  // 1 1 -> 1
  t.mult_[1] = {{1, 0, 1}};  // 1 X -> X
  t.mult_[2] = {{1, 0, 1}};  // X 1 -> X
  t.mult_[3] = {};           // X X -> 0
  t.comult_[0] = {{0, 1, 1}, {1, 0, 1}};  // 1 -> 1X + X1
  t.comult_[1] = {{1, 1, 1}};             // X -> XX
  return t;
}

FrobeniusTheory FrobeniusTheory::lee(Ring ring) {
  if (ring != Ring::Q) throw std::invalid_argument("Lee theory requires rational coefficients");
  FrobeniusTheory t = khovanov(Ring::Q);
  t.name_ = Theory::Lee;
  t.mult_[3] = {{0, 0, 1}};               // X X -> 1
  t.comult_[1] = {{1, 1, 1}, {0, 0, 1}};  // X -> XX + 11
  return t;
}

Generator ChainGroup::generator(std::size_t index, int crossings) const {
  auto it = std::upper_bound(offsets.begin(), offsets.end(), index);
  std::size_t pos = static_cast<std::size_t>(it - offsets.begin()) - 1;
  Generator g;
  g.vertex = {vertices.at(pos), crossings};
  g.labels = static_cast<std::uint32_t>(index - offsets[pos]);
  g.circle_count = circle_counts[pos];
  g.q = q.at(index);
  return g;
}

const ChainGroup* GradedChainComplex::group(int degree) const {
  if (groups.empty() || degree < min_degree() || degree > max_degree()) return nullptr;
  return &groups[static_cast<std::size_t>(degree - min_degree())];
}

const SparseMatrix* GradedChainComplex::differential(int degree) const {
  if (groups.empty() || degree < min_degree() || degree >= max_degree()) return nullptr;
  return &differentials[static_cast<std::size_t>(degree - min_degree())];
}

std::size_t GradedChainComplex::total_rank() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  return n;
}

namespace {

/// All states of a diagram with generator offsets per vertex.
struct CubeIndex {
  int n = 0;
  std::vector<ResolvedState> states;
  std::vector<std::vector<std::uint32_t>> by_weight;
  std::vector<std::size_t> offset;  // indexed by vertex bits

  explicit CubeIndex(const PlanarDiagram& d) : n(static_cast<int>(d.crossing_count())) {
    const std::uint32_t count = std::uint32_t{1} << n;
    states.reserve(count);
    for (std::uint32_t bits = 0; bits < count; ++bits) states.push_back(resolve(d, {bits, n}));
    by_weight.resize(static_cast<std::size_t>(n) + 1);
    for (std::uint32_t bits = 0; bits < count; ++bits) by_weight[std::popcount(bits)].push_back(bits);
    offset.assign(count, 0);
    for (auto& list : by_weight) {
      std::sort(list.begin(), list.end(),
                [&](std::uint32_t a, std::uint32_t b) { return vertex_less({a, n}, {b, n}); });
      std::size_t at = 0;
      for (std::uint32_t bits : list) {
        offset[bits] = at;
        at += std::size_t{1} << states[bits].circle_count;
      }
    }
  }

  std::size_t index(std::uint32_t bits, std::uint32_t labels) const { return offset[bits] + labels; }
};

int bit_of(std::uint32_t labels, int circles, int k) { return static_cast<int>((labels >> (circles - 1 - k)) & 1u); }

std::uint32_t place(int value, int circles, int k) {
  return static_cast<std::uint32_t>(value) << (circles - 1 - k);
}

void fill_differential(const CubeIndex& cube, const FrobeniusTheory& theory, int weight, SparseMatrix& out) {
  for (std::uint32_t bits : cube.by_weight[weight]) {
    const ResolvedState& from = cube.states[bits];
    const int c = from.circle_count;
    for (int axis = 0; axis < cube.n; ++axis) {
      if ((bits >> axis) & 1u) continue;
      const std::uint32_t to_bits = bits | (std::uint32_t{1} << axis);
      const ResolvedState& to = cube.states[to_bits];
      const int ct = to.circle_count;
      CubeEdge e = classify_edge(from, to, axis);
      for (std::uint32_t labels = 0; labels < (std::uint32_t{1} << c); ++labels) {
        std::uint32_t base = 0;
        for (int s = 0; s < c; ++s) {
          if (e.carry[s] >= 0) base |= place(bit_of(labels, c, s), ct, e.carry[s]);
        }
        const auto col = static_cast<std::int32_t>(cube.index(bits, labels));
        if (e.kind == EdgeKind::Merge) {
          for (const auto& t : theory.multiply(bit_of(labels, c, e.sources[0]), bit_of(labels, c, e.sources[1]))) {
            std::uint32_t idx = base | place(t.left, ct, e.targets[0]);
            out.add(static_cast<std::int32_t>(cube.index(to_bits, idx)), col, e.sign * t.coef);
          }
        } else {
          for (const auto& t : theory.comultiply(bit_of(labels, c, e.sources[0]))) {
            std::uint32_t idx = base | place(t.left, ct, e.targets[0]) | place(t.right, ct, e.targets[1]);
            out.add(static_cast<std::int32_t>(cube.index(to_bits, idx)), col, e.sign * t.coef);
          }
        }
      }
    }
  }
  out.canonicalize();
}

}  // namespace

GradedChainComplex build_complex(const PlanarDiagram& d, const FrobeniusTheory& theory, bool normalized,
                                 std::size_t cube_limit, const std::vector<bool>& orientation_reverse) {
  check_cube_limit(d, cube_limit);
  CubeIndex cube(d);
  GradedChainComplex out;
  out.theory = theory;
  out.normalized = normalized;
  out.crossings = cube.n;
  if (normalized) {
    OrientationData o = orient_and_count(d, orientation_reverse);
    out.h_shift = -o.n_minus;
    out.q_shift = o.n_plus - 2 * o.n_minus;
  }

  for (int w = 0; w <= cube.n; ++w) {
    ChainGroup g;
    g.degree = w + out.h_shift;
    for (std::uint32_t bits : cube.by_weight[w]) {
      const int c = cube.states[bits].circle_count;
      g.vertices.push_back(bits);
      g.circle_counts.push_back(c);
      g.offsets.push_back(g.offsets.back() + (std::size_t{1} << c));
      for (std::uint32_t labels = 0; labels < (std::uint32_t{1} << c); ++labels) {
        int xs = std::popcount(labels);
        g.q.push_back((c - xs) - xs + w + out.q_shift);
      }
    }
    out.groups.push_back(std::move(g));
  }
  for (int w = 0; w < cube.n; ++w) {
    SparseMatrix m(out.groups[w + 1].size(), out.groups[w].size());
    fill_differential(cube, theory, w, m);
    out.differentials.push_back(std::move(m));
  }
  return out;
}

GradedChainComplex shift(const GradedChainComplex& c, int h, int dq) {
  GradedChainComplex out = c;
  out.h_shift += h;
  out.q_shift += dq;
  for (auto& g : out.groups) {
    g.degree += h;
    for (int& q : g.q) q += dq;
  }
  return out;
}

namespace {

std::map<int, std::vector<std::pair<int, std::size_t>>> include_subcomplex(const PlanarDiagram& d,
                                                                          const CubeIndex& full,
                                                                          const SmoothedDiagram& sub,
                                                                          const GradedChainComplex& sub_complex,
                                                                          std::size_t crossing, int smoothing) {
  std::map<int, std::vector<std::pair<int, std::size_t>>> out;
  const int m = sub_complex.crossings;
  const std::uint32_t low_mask = (std::uint32_t{1} << crossing) - 1;
  for (const ChainGroup& g : sub_complex.groups) {
    auto& list = out[g.degree];
    list.reserve(g.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      const std::uint32_t bits = g.vertices[v];
      const std::uint32_t full_bits = (bits & low_mask) | (static_cast<std::uint32_t>(smoothing) << crossing) |
                                      ((bits & ~low_mask) << 1);
      const ResolvedState sub_state = resolve(sub.diagram, {bits, m});
      const ResolvedState& full_state = full.states[full_bits];
      const int sub_strand = sub_state.circle_count - sub.diagram.free_circles();
      const int full_strand = full_state.circle_count - d.free_circles();
      std::vector<int> circle_map(static_cast<std::size_t>(sub_state.circle_count));
      for (int k = 0; k < sub_state.circle_count; ++k) {
        if (k < sub_strand) {
          int label = sub.diagram.arcs()[static_cast<std::size_t>(sub_state.circle_arc[k])];
          circle_map[k] = full_state.arc_circle[d.arc_index(label)];
        } else if (int f = k - sub_strand; f < d.free_circles()) {
          circle_map[k] = full_strand + f;
        } else {
          int label = sub.circle_origin[static_cast<std::size_t>(f - d.free_circles())];
          circle_map[k] = full_state.arc_circle[d.arc_index(label)];
        }
      }
      const int c = sub_state.circle_count;
      const int cf = full_state.circle_count;
      for (std::uint32_t labels = 0; labels < (std::uint32_t{1} << c); ++labels) {
        std::uint32_t full_labels = 0;
        for (int k = 0; k < c; ++k) full_labels |= place(bit_of(labels, c, k), cf, circle_map[k]);
        list.push_back({g.degree + smoothing, full.index(full_bits, full_labels)});
      }
    }
  }
  return out;
}

}  // namespace

SubcomplexSplit subcomplex_split(const PlanarDiagram& d, std::size_t crossing, const FrobeniusTheory& theory,
                                 std::size_t cube_limit) {
  check_cube_limit(d, cube_limit);
  if (crossing >= d.crossing_count()) throw std::out_of_range("crossing index out of range");
  SubcomplexSplit out;
  out.zero = smooth_crossing(d, crossing, 0);
  out.one = smooth_crossing(d, crossing, 1);
  out.zero_complex = build_complex(out.zero.diagram, theory, false, cube_limit);
  out.one_complex = build_complex(out.one.diagram, theory, false, cube_limit);
  CubeIndex full(d);
  out.zero_inclusion = include_subcomplex(d, full, out.zero, out.zero_complex, crossing, 0);
  out.one_inclusion = include_subcomplex(d, full, out.one, out.one_complex, crossing, 1);
  return out;
}

namespace {

struct Binomials {
  std::array<std::array<std::uint64_t, 33>, 33> c{};
  Binomials() {
    for (int n = 0; n <= 32; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};
const Binomials binomials;

/// Position of a label word among the words with the same number of X's.
std::uint64_t colex_rank(std::uint32_t labels) {
  std::uint64_t r = 0;
  int k = 0;
  while (labels) {
    const int b = std::countr_zero(labels);
    r += binomials.c[b][++k];
    labels &= labels - 1;
  }
  return r;
}

/// Number of X labels a generator at a vertex with c circles needs for grading q.
int x_count(int c, int weight, int q_shift, int q) {
  const int twice = c + weight + q_shift - q;
  if (twice < 0 || twice % 2 != 0 || twice / 2 > c) return -1;
  return twice / 2;
}

}  // namespace

void for_each_graded_block(const PlanarDiagram& d, const FrobeniusTheory& theory, bool normalized,
                           std::size_t cube_limit, const std::vector<bool>& orientation_reverse,
                           const std::function<void(GradedBlock&)>& visit) {
  if (theory.name() != Theory::Khovanov) throw std::invalid_argument("graded blocks need a q-homogeneous theory");
  check_cube_limit(d, cube_limit);
  CubeIndex cube(d);
  int h_shift = 0, q_shift = 0;
  if (normalized) {
    OrientationData o = orient_and_count(d, orientation_reverse);
    h_shift = -o.n_minus;
    q_shift = o.n_plus - 2 * o.n_minus;
  }
  std::vector<std::size_t> target_offset(cube.states.size(), 0);
  for (int w = 0; w <= cube.n; ++w) {
    int qlo = 1 << 20, qhi = -(1 << 20);
    for (std::uint32_t bits : cube.by_weight[w]) {
      const int c = cube.states[bits].circle_count;
      qlo = std::min(qlo, -c + w + q_shift);
      qhi = std::max(qhi, c + w + q_shift);
    }
    for (int q = qlo; q <= qhi; q += 2) {
      GradedBlock block;
      block.degree = w + h_shift;
      block.q = q;
      std::vector<std::pair<std::uint32_t, std::size_t>> sources;  // vertex, offset
      for (std::uint32_t bits : cube.by_weight[w]) {
        const int c = cube.states[bits].circle_count;
        const int x = x_count(c, w, q_shift, q);
        if (x < 0) continue;
        sources.push_back({bits, block.source_dim});
        block.source_dim += binomials.c[c][x];
      }
      if (block.source_dim == 0) continue;
      if (w < cube.n) {
        for (std::uint32_t bits : cube.by_weight[w + 1]) {
          const int c = cube.states[bits].circle_count;
          const int x = x_count(c, w + 1, q_shift, q);
          target_offset[bits] = block.target_dim;
          if (x >= 0) block.target_dim += binomials.c[c][x];
        }
      }
      block.matrix = SparseMatrix(block.target_dim, block.source_dim);
      auto& out = block.matrix;
      for (const auto& [bits, offset] : sources) {
        if (w == cube.n) break;
        const ResolvedState& from = cube.states[bits];
        const int c = from.circle_count;
        const int x = x_count(c, w, q_shift, q);
        for (int axis = 0; axis < cube.n; ++axis) {
          if ((bits >> axis) & 1u) continue;
          const std::uint32_t to_bits = bits | (std::uint32_t{1} << axis);
          const ResolvedState& to = cube.states[to_bits];
          const int ct = to.circle_count;
          const std::size_t to_offset = target_offset[to_bits];
          const CubeEdge e = classify_edge(from, to, axis);
          auto emit = [&](std::uint32_t target_labels, std::int32_t col, int coef) {
            out.add(static_cast<std::int32_t>(to_offset + colex_rank(target_labels)), col, e.sign * coef);
          };
          std::uint32_t labels = x == 0 ? 0u : (std::uint32_t{1} << x) - 1;
          while (true) {
            const auto col = static_cast<std::int32_t>(offset + colex_rank(labels));
            std::uint32_t base = 0;
            for (int s = 0; s < c; ++s)
              if (e.carry[s] >= 0) base |= place(bit_of(labels, c, s), ct, e.carry[s]);
            if (e.kind == EdgeKind::Merge) {
              for (const auto& t : theory.multiply(bit_of(labels, c, e.sources[0]), bit_of(labels, c, e.sources[1])))
                emit(base | place(t.left, ct, e.targets[0]), col, t.coef);
            } else {
              for (const auto& t : theory.comultiply(bit_of(labels, c, e.sources[0])))
                emit(base | place(t.left, ct, e.targets[0]) | place(t.right, ct, e.targets[1]), col, t.coef);
            }
            if (x == 0) break;
            // next word with the same number of X's
            const std::uint32_t low = labels & (~labels + 1);
            const std::uint32_t ripple = labels + low;
            labels = (((ripple ^ labels) >> 2) / low) | ripple;
            if (labels >> c) break;
          }
        }
      }
      out.canonicalize();
      visit(block);
    }
  }
}

std::string dump_complex(const GradedChainComplex& c) {
  std::ostringstream out;
  out << "theory " << (c.theory.name() == Theory::Khovanov ? "khovanov" : "lee") << " normalized "
      << (c.normalized ? 1 : 0) << " shift [" << c.h_shift << "]{" << c.q_shift << "}\n";
  for (std::size_t k = 0; k < c.groups.size(); ++k) {
    const ChainGroup& g = c.groups[k];
    std::map<int, std::size_t> hist;
    for (int q : g.q) ++hist[q];
    out << "degree " << g.degree << " generators " << g.size() << " q";
    for (const auto& [q, n] : hist) out << ' ' << q << ':' << n;
    out << '\n';
    if (k < c.differentials.size()) {
      const SparseMatrix& m = c.differentials[k];
      out << "d " << g.degree << ' ' << m.rows() << 'x' << m.cols() << " entries " << m.entries().size() << '\n';
      for (const auto& t : m.entries()) out << t.row << ' ' << t.col << ' ' << t.value << '\n';
    }
  }
  return out.str();
}

}  // namespace khx
