#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "khx/cube.hpp"
#include "khx/diagram.hpp"
#include "khx/sparse.hpp"

namespace khx {

enum class Theory { Khovanov, Lee };
enum class Ring { Z, Q };

/// Multiplication and comultiplication on A = span{1, X}. Basis index 0 is
/// 1, index 1 is X.
class FrobeniusTheory {
 public:
  struct Term {
    int left = 0;
    int right = 0;
    int coef = 0;
  };

  static FrobeniusTheory khovanov(Ring ring = Ring::Z);
  /// Lee's deformation; only defined over Q.
  static FrobeniusTheory lee(Ring ring = Ring::Q);

  Theory name() const noexcept { return name_; }
  Ring ring() const noexcept { return ring_; }

  /// m(a (x) b) as a list of (left = result, coef).
  const std::vector<Term>& multiply(int a, int b) const { return mult_[2 * a + b]; }
  /// Delta(a) as a list of (left (x) right, coef).
  const std::vector<Term>& comultiply(int a) const { return comult_[a]; }

 private:
  Theory name_ = Theory::Khovanov;
  Ring ring_ = Ring::Z;
  std::array<std::vector<Term>, 4> mult_;
  std::array<std::vector<Term>, 2> comult_;
};

/// Enhanced state: a cube vertex with a 1/X label on each of its circles.
struct Generator {
  Vertex vertex;
  /// Bit (c - 1 - k) set when circle k is labelled X.
  std::uint32_t labels = 0;
  int circle_count = 0;
  int q = 0;
};

/// Generators of one homological degree, ordered by (vertex, labels)
/// lexicographically with 1 < X.
struct ChainGroup {
  int degree = 0;
  std::vector<std::uint32_t> vertices;
  std::vector<int> circle_counts;
  /// First generator index of each vertex, plus a final total.
  std::vector<std::size_t> offsets{0};
  std::vector<int> q;

  std::size_t size() const noexcept { return offsets.back(); }
  Generator generator(std::size_t index, int crossings) const;
};

class GradedChainComplex {
 public:
  FrobeniusTheory theory = FrobeniusTheory::khovanov();
  bool normalized = false;
  /// Homological and q shifts already applied to the unnormalized cube complex.
  int h_shift = 0;
  int q_shift = 0;
  int crossings = 0;
  /// Consecutive degrees starting at groups.front().degree.
  std::vector<ChainGroup> groups;
  /// differentials[k]: groups[k] -> groups[k+1]; rows index the target.
  std::vector<SparseMatrix> differentials;

  int min_degree() const { return groups.empty() ? 0 : groups.front().degree; }
  int max_degree() const { return groups.empty() ? 0 : groups.back().degree; }
  /// Null when the degree is outside the complex.
  const ChainGroup* group(int degree) const;
  /// d^i : C^i -> C^(i+1); null when either side is outside the complex.
  const SparseMatrix* differential(int degree) const;
  std::size_t total_rank() const;
};

GradedChainComplex build_complex(const PlanarDiagram& d, const FrobeniusTheory& theory, bool normalized,
                                 std::size_t cube_limit = default_cube_limit,
                                 const std::vector<bool>& orientation_reverse = {});

/// Relabel gradings: degree i -> i + h, q -> q + dq.
GradedChainComplex shift(const GradedChainComplex& c, int h, int dq);

/// CKh(D(*0)), CKh(D(*1)) unnormalized, and where their generators sit in CKh(D).
struct SubcomplexSplit {
  SmoothedDiagram zero;
  SmoothedDiagram one;
  GradedChainComplex zero_complex;
  GradedChainComplex one_complex;
  /// Per degree of the sub-complex: (degree in D, index in D) per generator.
  std::map<int, std::vector<std::pair<int, std::size_t>>> zero_inclusion;
  std::map<int, std::vector<std::pair<int, std::size_t>>> one_inclusion;
};

SubcomplexSplit subcomplex_split(const PlanarDiagram& d, std::size_t crossing, const FrobeniusTheory& theory,
                                 std::size_t cube_limit = default_cube_limit);

/// q-homogeneous block of d^i between the generators of grading q.
struct GradedBlock {
  int degree = 0;
  int q = 0;
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  SparseMatrix matrix;
};

/// Build the q-blocks of a q-homogeneous complex one at a time, in order of
/// degree then q, without materializing the whole complex. Every block with
/// a nonzero source is visited, including those of the top degree.
void for_each_graded_block(const PlanarDiagram& d, const FrobeniusTheory& theory, bool normalized,
                           std::size_t cube_limit, const std::vector<bool>& orientation_reverse,
                           const std::function<void(GradedBlock&)>& visit);

/// Per degree: generator count, q histogram, and matrix triplets.
std::string dump_complex(const GradedChainComplex& c);

}  // namespace khx
