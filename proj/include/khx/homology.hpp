#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "khx/complex.hpp"

namespace khx {

struct HomologyCell {
  std::size_t free = 0;
  /// Invariant factors greater than one, ascending.
  std::vector<mpz_class> torsion;

  bool empty() const noexcept { return free == 0 && torsion.empty(); }
  friend bool operator==(const HomologyCell&, const HomologyCell&) = default;
};

/// Homology as a map (homological degree i, q-grading j) -> cell. Only
/// nonempty cells are stored.
class BigradedGroup {
 public:
  BigradedGroup() = default;
  explicit BigradedGroup(Ring ring) : ring_(ring) {}

  Ring ring() const noexcept { return ring_; }
  const std::map<std::pair<int, int>, HomologyCell>& cells() const noexcept { return cells_; }

  /// Empty cells are dropped.
  void set(int i, int j, HomologyCell cell);
  void add_free(int i, int j, std::size_t n);
  void add_torsion(int i, int j, const mpz_class& factor);

  std::size_t free_rank(int i, int j) const;
  std::vector<mpz_class> torsion(int i, int j) const;
  bool has_torsion() const;
  std::size_t total_free_rank() const;
  /// Sum of free ranks in degree i over all j.
  std::size_t degree_rank(int i) const;

  /// Shift every cell by (di, dj).
  BigradedGroup shifted(int di, int dj) const;
  /// Forget torsion and retag as rational.
  BigradedGroup rational() const;

  friend bool operator==(const BigradedGroup& a, const BigradedGroup& b) {
    return a.ring_ == b.ring_ && a.cells_ == b.cells_;
  }

 private:
  Ring ring_ = Ring::Q;
  std::map<std::pair<int, int>, HomologyCell> cells_;
};

/// Which differential contributes torsion to H^i over Z.
enum class TorsionPlacement {
  /// Invariant factors of d^(i-1): torsion of coker(d^(i-1)).
  Incoming,
  /// Invariant factors of d^i: torsion as it appears in the dual (chain) complex.
  Outgoing,
};

BigradedGroup compute_homology(const GradedChainComplex& c, Ring ring,
                               TorsionPlacement placement = TorsionPlacement::Incoming);

/// Normalized Khovanov homology of a diagram.
BigradedGroup khovanov_homology(const PlanarDiagram& d, Ring ring, std::size_t cube_limit = default_cube_limit,
                                const std::vector<bool>& orientation_reverse = {},
                                TorsionPlacement placement = TorsionPlacement::Incoming);

/// Runs tasks on KHX_THREADS worker threads (default: hardware concurrency).
void run_parallel(std::vector<std::function<void()>>& tasks);
std::size_t worker_count();

/// Split every differential into q-blocks; throws std::logic_error when an
/// entry joins different q-gradings.
std::vector<GradedBlock> graded_blocks(const GradedChainComplex& c);

}  // namespace khx
