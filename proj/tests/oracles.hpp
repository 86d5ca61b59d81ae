#pragma once

// Reference computations for the tests. Each one is written from scratch
// with dense or brute-force methods and shares no code with the library
// beyond its data types.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Poly = std::map<int, std::int64_t>;

inline void trim(Poly& p) { std::erase_if(p, [](const auto& kv) { return kv.second == 0; }); }

inline Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) out[ea + eb] += ca * cb;
  trim(out);
  return out;
}

/// Unnormalized Jones polynomial by the Kauffman state sum:
/// sum over states of (-q)^(#1-smoothings) (q + 1/q)^(#loops). The
/// 0-smoothing joins slots (0,3), (1,2); the 1-smoothing (0,1), (2,3).
inline Poly state_sum(const std::vector<std::array<int, 4>>& crossings, int free_circles) {
  std::vector<int> labels;
  for (const auto& x : crossings) labels.insert(labels.end(), x.begin(), x.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  auto id = [&](int l) { return static_cast<int>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin()); };

  const int n = static_cast<int>(crossings.size());
  Poly total;
  for (std::uint32_t state = 0; state < (1u << n); ++state) {
    std::vector<int> parent(labels.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    auto join = [&](int a, int b) { parent[find(id(a))] = find(id(b)); };
    for (int k = 0; k < n; ++k) {
      const auto& x = crossings[k];
      if ((state >> k) & 1u) {
        join(x[0], x[1]);
        join(x[2], x[3]);
      } else {
        join(x[0], x[3]);
        join(x[1], x[2]);
      }
    }
    int loops = free_circles;
    for (std::size_t i = 0; i < labels.size(); ++i) loops += find(static_cast<int>(i)) == static_cast<int>(i);
    const int ones = std::popcount(state);
    Poly term{{ones, ones % 2 == 0 ? 1 : -1}};
    for (int l = 0; l < loops; ++l) term = multiply(term, Poly{{-1, 1}, {1, 1}});
    for (const auto& [e, c] : term) total[e] += c;
  }
  trim(total);
  return total;
}

/// (-1)^n- q^(n+ - 2n-) times the state sum.
inline Poly normalized_state_sum(const std::vector<std::array<int, 4>>& crossings, int free_circles, int n_plus,
                                 int n_minus) {
  Poly out;
  for (const auto& [e, c] : state_sum(crossings, free_circles))
    out[e + n_plus - 2 * n_minus] = n_minus % 2 == 0 ? c : -c;
  return out;
}

using Dense = std::vector<std::vector<mpz_class>>;

inline mpz_class determinant(Dense m) {
  // Bareiss fraction-free elimination.
  const std::size_t n = m.size();
  if (n == 0) return 1;
  mpz_class sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Invariant factors from determinantal divisors: d_k = gcd of all k x k
/// minors, factor_k = d_k / d_(k-1). Exponential; small matrices only.
inline std::vector<mpz_class> invariant_factors(const Dense& a) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<mpz_class> divisors{1};
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    mpz_class g = 0;
    std::vector<bool> rsel(rows, false), csel(cols, false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
    do {
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
      do {
        Dense minor;
        for (std::size_t i = 0; i < rows; ++i) {
          if (!rsel[i]) continue;
          std::vector<mpz_class> r;
          for (std::size_t j = 0; j < cols; ++j)
            if (csel[j]) r.push_back(a[i][j]);
          minor.push_back(r);
        }
        mpz_class d = determinant(minor);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
    if (g == 0) break;
    divisors.push_back(g);
  }
  std::vector<mpz_class> out;
  for (std::size_t k = 1; k < divisors.size(); ++k) out.push_back(divisors[k] / divisors[k - 1]);
  return out;
}

/// Rank over Q by dense Gaussian elimination on rationals.
inline std::size_t rank(const Dense& a) {
  std::vector<std::vector<mpq_class>> m;
  for (const auto& r : a) m.emplace_back(r.begin(), r.end());
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

inline Dense hstack(const Dense& a, const Dense& b) {
  Dense out = a;
  if (out.empty()) return b;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].insert(out[i].end(), b[i].begin(), b[i].end());
  return out;
}

/// Basis of the rational kernel of a, as columns of an integer matrix.
inline Dense kernel(const Dense& a, std::size_t cols) {
  std::vector<std::vector<mpq_class>> m;
  for (const auto& r : a) m.emplace_back(r.begin(), r.end());
  const std::size_t rows = m.size();
  std::vector<int> pivot_of_col(cols, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    mpq_class inv = 1 / m[r][c];
    for (std::size_t j = 0; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      mpq_class f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_of_col[c] = static_cast<int>(r);
    ++r;
  }
  std::vector<std::vector<mpq_class>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    std::vector<mpq_class> v(cols, 0);
    v[f] = 1;
    for (std::size_t c = 0; c < cols; ++c)
      if (pivot_of_col[c] >= 0) v[c] = -m[static_cast<std::size_t>(pivot_of_col[c])][f];
    basis.push_back(v);
  }
  // clear denominators, store as columns
  Dense out(cols, std::vector<mpz_class>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    mpz_class l = 1;
    for (const auto& x : basis[k]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    for (std::size_t c = 0; c < cols; ++c) {
      mpq_class s = basis[k][c] * l;
      out[c][k] = s.get_num();
    }
  }
  return out;
}

/// Dense matrices of a chain complex with its per-generator gradings.
struct DenseComplex {
  std::vector<int> degrees;
  std::vector<std::vector<int>> q;
  /// d[k] : group k -> group k+1, rows index the target.
  std::vector<Dense> d;
};

/// Survivor gradings of a filtered complex from first principles: for each
/// degree and level p, the dimension of the image of H(F^p) in H, where
/// F^p is spanned by generators of grading >= p. Returns (degree, p) ->
/// dim F^p H / F^(p+2) H.
inline std::map<std::pair<int, int>, std::size_t> filtered_survivors(const DenseComplex& c) {
  std::map<std::pair<int, int>, std::size_t> out;
  int lo = 1 << 20, hi = -(1 << 20);
  for (const auto& qs : c.q)
    for (int x : qs) lo = std::min(lo, x), hi = std::max(hi, x);
  for (std::size_t k = 0; k < c.degrees.size(); ++k) {
    const std::size_t n = c.q[k].size();
    // boundaries: columns of d[k-1]
    Dense b(n, std::vector<mpz_class>());
    if (k > 0) b = c.d[k - 1];
    const std::size_t rank_b = k > 0 ? rank(b) : 0;
    std::vector<std::size_t> dims;
    for (int p = lo; p <= hi + 2; p += 2) {
      std::vector<std::size_t> keep;
      for (std::size_t g = 0; g < n; ++g)
        if (c.q[k][g] >= p) keep.push_back(g);
      // cycles of F^p: kernel of d[k] restricted to the kept columns
      Dense restricted;
      if (k < c.d.size()) {
        for (const auto& row : c.d[k]) {
          std::vector<mpz_class> r;
          for (auto g : keep) r.push_back(row[g]);
          restricted.push_back(r);
        }
      }
      Dense z = kernel(restricted, keep.size());
      // embed into C^k
      Dense zc(n, std::vector<mpz_class>(z.empty() ? 0 : z[0].size()));
      for (std::size_t t = 0; t < keep.size(); ++t) zc[keep[t]] = z[t];
      const std::size_t zdim = z.empty() ? 0 : z[0].size();
      std::size_t image = 0;
      if (zdim > 0) image = rank(hstack(zc, b)) - rank_b;
      dims.push_back(image);
    }
    for (std::size_t l = 0; l + 1 < dims.size(); ++l)
      if (dims[l] > dims[l + 1]) out[{c.degrees[k], lo + 2 * static_cast<int>(l)}] = dims[l] - dims[l + 1];
  }
  return out;
}

}  // namespace oracle
