#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "khx/complex.hpp"

namespace khx {

/// Raised when Lee homology contradicts its structure theorem, e.g. a knot
/// with other than two surviving classes.
class LeeConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LeeRanks {
  std::map<int, std::size_t> by_degree;
  std::size_t total() const;
};

LeeRanks lee_homology_rank(const PlanarDiagram& d, std::size_t cube_limit = default_cube_limit,
                           const std::vector<bool>& orientation_reverse = {});

struct Survivor {
  int q = 0;
  int degree = 0;
  std::size_t multiplicity = 0;
  friend bool operator==(const Survivor&, const Survivor&) = default;
};

/// Associated graded of Lee homology under the q-filtration.
struct SpectralData {
  std::vector<Survivor> survivors;
  std::size_t total() const;
};

/// Survivor gradings by direct filtered ranks: at each level p, the rank of
/// H(F^p C) -> H(C). Knots only.
SpectralData e_infinity_gradings(const PlanarDiagram& d, std::size_t cube_limit = default_cube_limit);
/// Same computation on an already built normalized Lee complex; accepts links.
SpectralData filtered_survivors(const GradedChainComplex& lee);

struct SInvariantResult {
  int s = 0;
  int degree = 0;
  std::vector<Survivor> survivors;
};

SInvariantResult s_invariant(const PlanarDiagram& d, std::size_t cube_limit = default_cube_limit);
/// s from a list of survivors; validates count and spacing.
SInvariantResult s_from_survivors(const std::vector<Survivor>& survivors);

/// E_r dimensions of the Lee spectral sequence, with r measured in q units:
/// d_r maps E_r^(i, p) to E_r^(i+1, p+r). E_1 is Khovanov homology; the
/// only possible differentials have r divisible by 4.
struct SpectralPages {
  /// pages[r - 1]: (i, p) -> dim E_r for r = 1 .. computed pages.
  std::vector<std::map<std::pair<int, int>, std::size_t>> pages;
  /// ranks[r - 1]: (i, p) -> rank of d_r leaving E_r^(i, p).
  std::vector<std::map<std::pair<int, int>, std::size_t>> ranks;
  /// Limit page computed from filtered homology.
  std::map<std::pair<int, int>, std::size_t> infinity;
  bool stabilized = false;
  /// First page equal to the limit, or 0 when not reached.
  int stable_from = 0;
};

SpectralPages spectral_pages(const PlanarDiagram& d, int max_r, std::size_t cube_limit = default_cube_limit);
SpectralPages spectral_pages(const GradedChainComplex& lee, int max_r);

}  // namespace khx
