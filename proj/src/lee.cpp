#include "khx/lee.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "khx/homology.hpp"

namespace khx {

std::size_t LeeRanks::total() const {
  std::size_t n = 0;
  for (const auto& [i, r] : by_degree) n += r;
  return n;
}

std::size_t SpectralData::total() const {
  std::size_t n = 0;
  for (const auto& s : survivors) n += s.multiplicity;
  return n;
}

namespace {

GradedChainComplex lee_complex(const PlanarDiagram& d, std::size_t cube_limit,
                               const std::vector<bool>& orientation_reverse = {}) {
  return build_complex(d, FrobeniusTheory::lee(Ring::Q), true, cube_limit, orientation_reverse);
}

std::vector<std::size_t> differential_ranks(const GradedChainComplex& c) {
  std::vector<std::size_t> ranks(c.differentials.size());
  std::vector<std::function<void()>> tasks;
  for (std::size_t k = 0; k < ranks.size(); ++k) tasks.emplace_back([&, k] { ranks[k] = rank_q(c.differentials[k]); });
  run_parallel(tasks);
  return ranks;
}

/// Rank of a prefix of vectors taken in a fixed order, looked up by how
/// many vectors qualify.
std::size_t rank_of_prefix(const std::vector<std::size_t>& ranks, std::size_t count) {
  return count == 0 ? 0 : ranks[count - 1];
}

/// d^i with its source and target gradings.
struct FilteredMap {
  const SparseMatrix* m = nullptr;
  const std::vector<int>* src_q = nullptr;
  const std::vector<int>* dst_q = nullptr;

  /// (q, R(q, inf)) for the distinct source gradings q, descending: rank of
  /// the columns of grading >= q.
  std::vector<std::pair<int, std::size_t>> column_ranks() const {
    std::vector<SparseVector> cols(m->cols());
    for (const auto& t : m->entries()) cols[t.col].push_back({t.row, t.value});
    std::vector<std::int32_t> order(m->cols());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return (*src_q)[a] > (*src_q)[b]; });
    std::vector<SparseVector> vectors;
    vectors.reserve(order.size());
    for (auto c : order) vectors.push_back(std::move(cols[c]));
    std::vector<std::size_t> ranks = prefix_ranks(vectors);
    std::vector<std::pair<int, std::size_t>> out;
    for (std::size_t k = 0; k < order.size(); ++k) {
      int q = (*src_q)[order[k]];
      if (k + 1 == order.size() || (*src_q)[order[k + 1]] != q) out.push_back({q, ranks[k]});
    }
    return out;
  }

  /// For every target level b in `levels` (ascending): rank of the rows of
  /// grading < b restricted to columns of grading >= a.
  std::vector<std::size_t> row_ranks(int a, const std::vector<int>& levels) const {
    std::vector<SparseVector> rows(m->rows());
    for (const auto& t : m->entries())
      if ((*src_q)[t.col] >= a) rows[t.row].push_back({t.col, t.value});
    std::vector<std::int32_t> order(m->rows());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return (*dst_q)[x] < (*dst_q)[y]; });
    std::vector<SparseVector> vectors;
    vectors.reserve(order.size());
    for (auto r : order) vectors.push_back(std::move(rows[r]));
    std::vector<std::size_t> ranks = prefix_ranks(vectors);
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (int b : levels) {
      while (k < order.size() && (*dst_q)[order[k]] < b) ++k;
      out.push_back(rank_of_prefix(ranks, k));
    }
    return out;
  }
};

constexpr int kNoLevel = 1 << 29;

std::vector<int> levels_of(const GradedChainComplex& c) {
  int lo = kNoLevel, hi = -kNoLevel;
  for (const auto& g : c.groups)
    for (int q : g.q) lo = std::min(lo, q), hi = std::max(hi, q);
  std::vector<int> out;
  if (lo > hi) return out;
  for (int p = lo; p <= hi + 2; p += 2) out.push_back(p);
  return out;
}

std::size_t count_at_least(const std::vector<int>& qs, int p) {
  return static_cast<std::size_t>(std::count_if(qs.begin(), qs.end(), [&](int q) { return q >= p; }));
}

FilteredMap map_at(const GradedChainComplex& c, std::size_t k) {
  return {&c.differentials[k], &c.groups[k].q, &c.groups[k + 1].q};
}

}  // namespace

LeeRanks lee_homology_rank(const PlanarDiagram& d, std::size_t cube_limit,
                           const std::vector<bool>& orientation_reverse) {
  GradedChainComplex c = lee_complex(d, cube_limit, orientation_reverse);
  std::vector<std::size_t> ranks = differential_ranks(c);
  LeeRanks out;
  for (std::size_t k = 0; k < c.groups.size(); ++k) {
    std::size_t r = c.groups[k].size();
    if (k < ranks.size()) r -= ranks[k];
    if (k > 0) r -= ranks[k - 1];
    if (r > 0) out.by_degree[c.groups[k].degree] = r;
  }
  return out;
}

SpectralData filtered_survivors(const GradedChainComplex& c) {
  if (c.theory.name() != Theory::Lee || !c.normalized)
    throw std::invalid_argument("filtered survivors need a normalized Lee complex");
  const std::vector<int> levels = levels_of(c);
  std::vector<std::size_t> ranks = differential_ranks(c);
  SpectralData out;
  for (std::size_t k = 0; k < c.groups.size(); ++k) {
    const ChainGroup& g = c.groups[k];
    std::size_t in_rank = k > 0 ? ranks[k - 1] : 0;
    std::size_t out_rank = k < ranks.size() ? ranks[k] : 0;
    if (g.size() == out_rank + in_rank) continue;

    // dim F^p Z = dim F^p C - R_out(p, inf); dim F^p B = rank d_in - R_in(-inf, p).
    std::vector<std::pair<int, std::size_t>> out_cols;
    if (k < ranks.size()) out_cols = map_at(c, k).column_ranks();
    std::vector<std::size_t> in_rows(levels.size(), 0);
    if (k > 0) in_rows = map_at(c, k - 1).row_ranks(-kNoLevel, levels);

    auto filtered_dim = [&](std::size_t level) {
      const int p = levels[level];
      std::size_t r_out = 0;
      for (const auto& [q, r] : out_cols) {
        if (q < p) break;
        r_out = r;
      }
      return count_at_least(g.q, p) - r_out - (in_rank - in_rows[level]);
    };
    std::vector<std::size_t> dims(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) dims[l] = filtered_dim(l);
    for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
      if (dims[l] > dims[l + 1]) out.survivors.push_back({levels[l], g.degree, dims[l] - dims[l + 1]});
    }
  }
  return out;
}

SpectralData e_infinity_gradings(const PlanarDiagram& d, std::size_t cube_limit) {
  if (d.component_count() != 1)
    throw std::invalid_argument("survivor gradings are computed for knots only (got " +
                                std::to_string(d.component_count()) + " components)");
  return filtered_survivors(lee_complex(d, cube_limit));
}

SInvariantResult s_from_survivors(const std::vector<Survivor>& survivors) {
  std::vector<Survivor> flat;
  for (const auto& s : survivors)
    for (std::size_t k = 0; k < s.multiplicity; ++k) flat.push_back({s.q, s.degree, 1});
  if (flat.size() != 2)
    throw LeeConsistencyError("expected 2 surviving classes for a knot, found " + std::to_string(flat.size()));
  std::sort(flat.begin(), flat.end(), [](const auto& a, const auto& b) { return a.q < b.q; });
  if (flat[1].q - flat[0].q != 2)
    throw LeeConsistencyError("surviving classes are " + std::to_string(flat[1].q - flat[0].q) +
                              " apart in q, expected 2");
  if (flat[0].degree != flat[1].degree) throw LeeConsistencyError("surviving classes lie in different degrees");
  SInvariantResult r;
  r.s = (flat[0].q + flat[1].q) / 2;
  r.degree = flat[0].degree;
  r.survivors = survivors;
  return r;
}

SInvariantResult s_invariant(const PlanarDiagram& d, std::size_t cube_limit) {
  return s_from_survivors(e_infinity_gradings(d, cube_limit).survivors);
}

SpectralPages spectral_pages(const PlanarDiagram& d, int max_r, std::size_t cube_limit) {
  if (d.component_count() != 1) throw std::invalid_argument("spectral pages are computed for knots only");
  return spectral_pages(lee_complex(d, cube_limit), max_r);
}

SpectralPages spectral_pages(const GradedChainComplex& c, int max_r) {
  if (max_r < 1) throw std::invalid_argument("max_r must be at least 1");
  const std::vector<int> levels = levels_of(c);
  const std::size_t L = levels.size();
  // R[k][a][b]: rank of d^k from sources q >= levels[a] to targets q < levels[b],
  // the last b index meaning no bound.
  std::vector<std::vector<std::vector<std::size_t>>> R(c.differentials.size());
  std::vector<int> bounds = levels;
  bounds.push_back(kNoLevel);
  for (std::size_t k = 0; k < c.differentials.size(); ++k) {
    FilteredMap f = map_at(c, k);
    R[k].resize(L);
    std::vector<std::function<void()>> tasks;
    for (std::size_t a = 0; a < L; ++a) tasks.emplace_back([&, a] { R[k][a] = f.row_ranks(levels[a], bounds); });
    run_parallel(tasks);
  }
  auto level_index = [&](int p) -> std::size_t {
    if (p <= levels.front()) return 0;
    if (p > levels.back()) return L;
    return static_cast<std::size_t>((p - levels.front() + 1) / 2);
  };
  // rank of d^k from q >= a to q < b, for arbitrary integers a, b
  auto rank = [&](std::size_t k, int a, long b) -> std::size_t {
    std::size_t ai = level_index(a);
    if (ai >= L) return 0;
    std::size_t bi = b >= kNoLevel ? L : level_index(static_cast<int>(b));
    return R[k][ai][bi];
  };
  auto fdim = [&](std::size_t k, int p) { return count_at_least(c.groups[k].q, p); };
  auto z = [&](std::size_t k, int p, int r) -> std::size_t {
    std::size_t n = fdim(k, p);
    if (k < R.size()) n -= rank(k, p, r < 0 ? kNoLevel : static_cast<long>(p) + r);
    return n;
  };
  // dim d(Z_r^s) in degree k, coming from degree k - 1
  auto dz = [&](std::size_t k, int s, int r) -> std::size_t {
    if (k == 0) return 0;
    return rank(k - 1, s, kNoLevel) - rank(k - 1, s, static_cast<long>(s) + r);
  };

  SpectralPages out;
  const int lo = levels.empty() ? 0 : levels.front();
  const int hi = levels.empty() ? 0 : levels.back();
  for (std::size_t k = 0; k < c.groups.size(); ++k) {
    const std::size_t in_total = k > 0 ? rank(k - 1, lo, kNoLevel) : 0;
    for (int p = lo; p < hi + 2; p += 2) {
      std::size_t zp = fdim(k, p) - (k < R.size() ? rank(k, p, kNoLevel) : 0);
      std::size_t zn = fdim(k, p + 2) - (k < R.size() ? rank(k, p + 2, kNoLevel) : 0);
      std::size_t bp = in_total - (k > 0 ? rank(k - 1, lo, p) : 0);
      std::size_t bn = in_total - (k > 0 ? rank(k - 1, lo, p + 2) : 0);
      std::size_t dim = (zp - bp) - (zn - bn);
      if (dim) out.infinity[{c.groups[k].degree, p}] = dim;
    }
  }

  for (int r = 1; r <= max_r; ++r) {
    std::map<std::pair<int, int>, std::size_t> page;
    for (std::size_t k = 0; k < c.groups.size(); ++k) {
      for (int p = lo; p <= hi; p += 2) {
        long dim = static_cast<long>(z(k, p, r)) - static_cast<long>(z(k, p + 1, r - 1)) -
                   static_cast<long>(dz(k, p - r + 1, r - 1)) + static_cast<long>(dz(k, p - r + 1, r));
        if (dim < 0) throw LeeConsistencyError("negative page dimension");
        if (dim) page[{c.groups[k].degree, p}] = static_cast<std::size_t>(dim);
      }
    }
    out.pages.push_back(page);
    if (page == out.infinity && !out.stabilized) {
      out.stabilized = true;
      out.stable_from = r;
    }
    if (out.stabilized) break;
  }
  // The image of d_r leaving (i, p) is d(Z_r^p) modulo what already died:
  // [dZ_r^p - dZ_(r+1)^p] - [dZ_(r-1)^(p+1) - dZ_r^(p+1)], taken in degree i + 1.
  for (std::size_t r = 1; r <= out.pages.size(); ++r) {
    std::map<std::pair<int, int>, std::size_t> ranks;
    const int rr = static_cast<int>(r);
    for (std::size_t k = 0; k + 1 < c.groups.size(); ++k) {
      for (int p = lo; p <= hi; p += 2) {
        long im = static_cast<long>(dz(k + 1, p, rr)) - static_cast<long>(dz(k + 1, p, rr + 1)) -
                  static_cast<long>(dz(k + 1, p + 1, rr - 1)) + static_cast<long>(dz(k + 1, p + 1, rr));
        if (im > 0) ranks[{c.groups[k].degree, p}] = static_cast<std::size_t>(im);
      }
    }
    out.ranks.push_back(ranks);
  }
  return out;
}

}  // namespace khx
