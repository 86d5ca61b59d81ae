#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace khx {

struct Triplet {
  std::int32_t row = 0;
  std::int32_t col = 0;
  std::int64_t value = 0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Integer matrix in coordinate form. Entries need not be sorted; duplicate
/// coordinates are summed by `canonicalize`.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Triplet>& entries() const noexcept { return entries_; }
  std::vector<Triplet>& entries() noexcept { return entries_; }

  void add(std::int32_t row, std::int32_t col, std::int64_t value) { entries_.push_back({row, col, value}); }

  /// Sort by (row, col), merge duplicates and drop zeros.
  void canonicalize();

  SparseMatrix transposed() const;

  /// this * rhs, with canonical entries.
  SparseMatrix multiply(const SparseMatrix& rhs) const;

  bool is_zero() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triplet> entries_;
};

/// Invariant factors of an integer matrix, ascending, each dividing the next.
struct SmithDecomposition {
  std::vector<mpz_class> factors;
  std::size_t rank = 0;

  /// Factors greater than one.
  std::vector<mpz_class> torsion() const;
};

/// Exact rank over Q.
std::size_t rank_q(const SparseMatrix& m);

/// Invariant factors via unit-pivot sparse elimination followed by a dense
/// smallest-pivot reduction of what remains.
SmithDecomposition smith_normal_form(const SparseMatrix& m);

using SparseVector = std::vector<std::pair<std::int32_t, std::int64_t>>;

/// ranks[k] = rank over Q of vectors[0..k].
std::vector<std::size_t> prefix_ranks(const std::vector<SparseVector>& vectors);

/// Largest dense residual (rows * cols) the Smith reduction accepts.
inline constexpr std::size_t dense_residual_limit = 40'000'000;

}  // namespace khx
