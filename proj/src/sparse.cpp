#include "khx/sparse.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "khx/cube.hpp"
#include "khx/scalar.hpp"

namespace khx {

void SparseMatrix::canonicalize() {
  std::sort(entries_.begin(), entries_.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  std::size_t out = 0;
  for (std::size_t k = 0; k < entries_.size();) {
    Triplet t = entries_[k];
    std::size_t j = k + 1;
    for (; j < entries_.size() && entries_[j].row == t.row && entries_[j].col == t.col; ++j) t.value += entries_[j].value;
    if (t.value != 0) entries_[out++] = t;
    k = j;
  }
  entries_.resize(out);
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t(cols_, rows_);
  t.entries_.reserve(entries_.size());
  for (const auto& e : entries_) t.add(e.col, e.row, e.value);
  return t;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix shapes do not compose");
  std::vector<std::vector<std::pair<std::int32_t, std::int64_t>>> rhs_rows(rhs.rows_);
  for (const auto& e : rhs.entries_) rhs_rows[e.row].push_back({e.col, e.value});
  SparseMatrix out(rows_, rhs.cols_);
  for (const auto& e : entries_) {
    for (const auto& [c, v] : rhs_rows[e.col]) out.add(e.row, c, e.value * v);
  }
  out.canonicalize();
  return out;
}

bool SparseMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Triplet& t) { return t.value == 0; });
}

std::vector<mpz_class> SmithDecomposition::torsion() const {
  std::vector<mpz_class> out;
  for (const auto& f : factors) {
    if (f > 1) out.push_back(f);
  }
  return out;
}

namespace {

template <class T>
using Row = std::vector<std::pair<std::int32_t, T>>;

/// dst -= factor * src, both sorted by column. New columns are reported.
template <class T, class OnNew>
void axpy(Row<T>& dst, const T& factor, const Row<T>& src, OnNew&& on_new) {
  Row<T> out;
  out.reserve(dst.size() + src.size());
  std::size_t i = 0, j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
      out.push_back(std::move(dst[i++]));
    } else if (i == dst.size() || src[j].first < dst[i].first) {
      on_new(src[j].first);
      out.push_back({src[j].first, T(0) - factor * src[j].second});
      ++j;
    } else {
      T v = dst[i].second - factor * src[j].second;
      if (!num::is_zero(v)) out.push_back({dst[i].first, std::move(v)});
      ++i;
      ++j;
    }
  }
  dst.swap(out);
}

/// dst = a * dst - b * src.
template <class T, class OnNew>
void scaled_combine(Row<T>& dst, const T& a, const T& b, const Row<T>& src, OnNew&& on_new) {
  Row<T> out;
  out.reserve(dst.size() + src.size());
  std::size_t i = 0, j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
      out.push_back({dst[i].first, a * dst[i].second});
      ++i;
    } else if (i == dst.size() || src[j].first < dst[i].first) {
      on_new(src[j].first);
      out.push_back({src[j].first, T(0) - b * src[j].second});
      ++j;
    } else {
      T v = a * dst[i].second - b * src[j].second;
      if (!num::is_zero(v)) out.push_back({dst[i].first, std::move(v)});
      ++i;
      ++j;
    }
  }
  dst.swap(out);
}

template <class T>
void remove_content(Row<T>& row) {
  if (row.empty()) return;
  T g = num::abs(row.front().second);
  for (std::size_t k = 1; k < row.size() && !num::is_unit(g); ++k) g = num::gcd(g, row[k].second);
  if (num::is_unit(g)) return;
  for (auto& e : row) e.second = e.second / g;
}

/// Row-oriented sparse elimination with column occupancy lists.
template <class T>
class Eliminator {
 public:
  explicit Eliminator(const SparseMatrix& m) : rows_(m.rows()), col_rows_(m.cols()), alive_(m.rows(), true) {
    std::vector<Triplet> es = m.entries();
    std::sort(es.begin(), es.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    for (std::size_t k = 0; k < es.size();) {
      std::int64_t v = es[k].value;
      std::size_t j = k + 1;
      for (; j < es.size() && es[j].row == es[k].row && es[j].col == es[k].col; ++j) v += es[j].value;
      if (v != 0) {
        rows_[es[k].row].push_back({es[k].col, num::from_int64<T>(v)});
        col_rows_[es[k].col].push_back(es[k].row);
      }
      k = j;
    }
  }

  /// Eliminate with every available +-1 pivot. Returns the number used.
  std::size_t unit_phase() {
    std::size_t pivots = 0;
    bool progress = true;
    std::vector<std::int32_t> order(rows_.size());
    while (progress) {
      progress = false;
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::int32_t a, std::int32_t b) { return rows_[a].size() < rows_[b].size(); });
      for (std::int32_t r : order) {
        if (!alive_[r]) continue;
        if (rows_[r].empty()) {
          alive_[r] = false;
          continue;
        }
        std::int32_t best = -1;
        std::size_t best_count = 0;
        for (const auto& [c, v] : rows_[r]) {
          if (!num::is_unit(v)) continue;
          std::size_t count = col_rows_[c].size();
          if (best < 0 || count < best_count) {
            best = c;
            best_count = count;
          }
        }
        if (best < 0) continue;
        eliminate(r, best, false);
        ++pivots;
        progress = true;
      }
    }
    return pivots;
  }

  /// Fraction-free elimination with arbitrary pivots (rank over Q only).
  std::size_t general_phase() {
    std::size_t pivots = 0;
    while (true) {
      std::int32_t r = -1;
      for (std::size_t k = 0; k < rows_.size(); ++k) {
        if (!alive_[k]) continue;
        if (rows_[k].empty()) {
          alive_[k] = false;
          continue;
        }
        if (r < 0 || rows_[k].size() < rows_[r].size()) r = static_cast<std::int32_t>(k);
      }
      if (r < 0) return pivots;
      std::int32_t best = rows_[r].front().first;
      const T* best_v = &rows_[r].front().second;
      for (const auto& [c, v] : rows_[r]) {
        if (num::abs_less(v, *best_v) || (!num::abs_less(*best_v, v) && col_rows_[c].size() < col_rows_[best].size())) {
          best = c;
          best_v = &v;
        }
      }
      eliminate(r, best, true);
      ++pivots;
    }
  }

  /// Remaining nonzero rows, columns compacted, as a dense mpz matrix.
  std::vector<std::vector<mpz_class>> residual() const {
    std::vector<std::int32_t> live_rows;
    std::map<std::int32_t, std::size_t> col_index;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!alive_[r] || rows_[r].empty()) continue;
      live_rows.push_back(static_cast<std::int32_t>(r));
      for (const auto& e : rows_[r]) col_index.emplace(e.first, 0);
    }
    std::size_t k = 0;
    for (auto& [c, idx] : col_index) idx = k++;
    if (live_rows.size() * col_index.size() > dense_residual_limit) {
      throw ResourceLimitError("Smith reduction residual is too large: " + std::to_string(live_rows.size()) + "x" +
                               std::to_string(col_index.size()));
    }
    std::vector<std::vector<mpz_class>> dense(live_rows.size(), std::vector<mpz_class>(col_index.size()));
    for (std::size_t i = 0; i < live_rows.size(); ++i) {
      for (const auto& [c, v] : rows_[live_rows[i]]) dense[i][col_index[c]] = num::to_mpz(v);
    }
    return dense;
  }

 private:
  bool row_has(std::int32_t r, std::int32_t c, T* value) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::int32_t x) { return e.first < x; });
    if (it == row.end() || it->first != c) return false;
    *value = it->second;
    return true;
  }

  void eliminate(std::int32_t r, std::int32_t c, bool fraction_free) {
    T pivot;
    row_has(r, c, &pivot);
    std::vector<std::int32_t> targets;
    targets.swap(col_rows_[c]);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    const Row<T>& src = rows_[r];
    for (std::int32_t r2 : targets) {
      if (r2 == r || !alive_[r2]) continue;
      T v;
      if (!row_has(r2, c, &v)) continue;
      auto on_new = [&](std::int32_t col) { col_rows_[col].push_back(r2); };
      if (!fraction_free) {
        // pivot is +-1, so v / pivot == v * pivot.
        axpy(rows_[r2], T(v * pivot), src, on_new);
      } else {
        T g = num::gcd(pivot, v);
        scaled_combine(rows_[r2], T(pivot / g), T(v / g), src, on_new);
        remove_content(rows_[r2]);
      }
    }
    alive_[r] = false;
    rows_[r].clear();
    rows_[r].shrink_to_fit();
  }

  std::vector<Row<T>> rows_;
  std::vector<std::vector<std::int32_t>> col_rows_;
  std::vector<bool> alive_;
};

std::vector<mpz_class> dense_smith_diagonal(std::vector<std::vector<mpz_class>> a) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  std::vector<mpz_class> diag;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // Smallest nonzero magnitude in the trailing block becomes the pivot.
    std::size_t pr = m, pc = n;
    for (std::size_t i = t; i < m; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        if (sgn(a[i][j]) != 0 && (pr == m || mpz_cmpabs(a[i][j].get_mpz_t(), a[pr][pc].get_mpz_t()) < 0)) {
          pr = i;
          pc = j;
        }
      }
    }
    if (pr == m) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);

    while (true) {
      bool clean = true;
      mpz_class q;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(a[i][t]) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t j = t; j < n; ++j) {
          if (sgn(a[t][j]) != 0) a[i][j] -= q * a[t][j];
        }
        if (sgn(a[i][t]) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(a[t][j]) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t i = t; i < m; ++i) {
          if (sgn(a[i][t]) != 0) a[i][j] -= q * a[i][t];
        }
        if (sgn(a[t][j]) != 0) clean = false;
      }
      if (clean) break;
      // Move the smallest remainder in row t / column t onto the diagonal.
      std::size_t br = t, bc = t;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(a[i][t]) != 0 && mpz_cmpabs(a[i][t].get_mpz_t(), a[br][bc].get_mpz_t()) < 0) {
          br = i;
          bc = t;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(a[t][j]) != 0 && mpz_cmpabs(a[t][j].get_mpz_t(), a[br][bc].get_mpz_t()) < 0) {
          br = t;
          bc = j;
        }
      }
      std::swap(a[t], a[br]);
      for (auto& row : a) std::swap(row[t], row[bc]);
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

/// Turn a diagonal into a divisibility chain: (a, b) -> (gcd, lcm).
void normalize_chain(std::vector<mpz_class>& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d[i] == 1) break;
      mpz_class g = num::gcd(d[i], d[j]);
      if (g == d[i]) continue;
      mpz_class l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  }
  std::sort(d.begin(), d.end());
}

template <class T>
std::size_t rank_with(const SparseMatrix& m) {
  Eliminator<T> e(m);
  std::size_t r = e.unit_phase();
  return r + e.general_phase();
}

template <class T>
SmithDecomposition smith_with(const SparseMatrix& m) {
  Eliminator<T> e(m);
  std::size_t units = e.unit_phase();
  std::vector<mpz_class> rest = dense_smith_diagonal(e.residual());
  normalize_chain(rest);
  SmithDecomposition out;
  out.factors.assign(units, mpz_class(1));
  for (auto& f : rest) out.factors.push_back(std::move(f));
  normalize_chain(out.factors);
  out.rank = out.factors.size();
  return out;
}

}  // namespace

std::size_t rank_q(const SparseMatrix& m) {
  try {
    return rank_with<Checked64>(m);
  } catch (const OverflowError&) {
    return rank_with<mpz_class>(m);
  }
}

SmithDecomposition smith_normal_form(const SparseMatrix& m) {
  try {
    return smith_with<Checked64>(m);
  } catch (const OverflowError&) {
    return smith_with<mpz_class>(m);
  }
}

namespace {

template <class T>
std::vector<std::size_t> prefix_ranks_with(const std::vector<SparseVector>& vectors) {
  // Reduced basis keyed by its largest index.
  std::map<std::int32_t, Row<T>> basis;
  std::vector<std::size_t> ranks;
  ranks.reserve(vectors.size());
  auto ignore = [](std::int32_t) {};
  Row<T> v;
  for (const auto& input : vectors) {
    v.clear();
    for (const auto& [i, x] : input) {
      if (x != 0) v.push_back({i, num::from_int64<T>(x)});
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    while (!v.empty()) {
      auto it = basis.find(v.back().first);
      if (it == basis.end()) {
        remove_content(v);
        basis.emplace(v.back().first, v);
        break;
      }
      const Row<T>& b = it->second;
      const T& bp = b.back().second;
      T vp = v.back().second;
      if (num::is_unit(bp)) {
        axpy(v, T(vp * bp), b, ignore);
      } else {
        T g = num::gcd(bp, vp);
        scaled_combine(v, T(bp / g), T(vp / g), b, ignore);
        remove_content(v);
      }
    }
    ranks.push_back(basis.size());
  }
  return ranks;
}

}  // namespace

std::vector<std::size_t> prefix_ranks(const std::vector<SparseVector>& vectors) {
  try {
    return prefix_ranks_with<Checked64>(vectors);
  } catch (const OverflowError&) {
    return prefix_ranks_with<mpz_class>(vectors);
  }
}

}  // namespace khx
