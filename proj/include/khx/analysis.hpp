#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "khx/homology.hpp"
#include "khx/lee.hpp"

namespace khx {

/// Bad parameters or inputs that do not have the shape an argument needs.
class AnalysisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One displayed line of a closed-form statement: Kh^degree = sum of
/// Q_(q)^multiplicity.
struct FormulaLine {
  std::string label;
  int degree = 0;
  std::vector<std::pair<int, int>> summands;  // (q, multiplicity)
};

struct ClosedFormTable {
  int p = 3;
  int q = 0;
  std::vector<FormulaLine> lines;
  /// Lines resolved into a table; degrees in `ambiguous_degrees` are left out.
  BigradedGroup table{Ring::Q};
  /// Degrees assigned by more than one line, or left unassigned inside the
  /// support.
  std::set<int> ambiguous_degrees;
  /// Human-readable notes on each ambiguity.
  std::vector<std::string> conflicts;

  /// Sum of every line's multiplicities, as written.
  std::size_t written_rank() const;
};

ClosedFormTable theorem1_formula(int q);
ClosedFormTable theorem2_formula(int p, int q);

/// First cell where `computed` (free ranks) and the formula table differ,
/// ignoring ambiguous degrees.
std::optional<std::pair<int, int>> first_mismatch(const ClosedFormTable& formula, const BigradedGroup& computed);

struct LesReport {
  int crossing = 0;
  BigradedGroup whole{Ring::Q};  // unnormalized homology of D
  BigradedGroup zero{Ring::Q};   // of D(*0)
  BigradedGroup one{Ring::Q};    // of D(*1)
  /// Per q-grading j: sum over i of (-1)^i (dim A^i - dim B^i + dim C^i), where
  /// A^i = H^(i-1)(D(*1))_(j-1), B^i = H^i(D)_j, C^i = H^i(D(*0))_j.
  std::map<int, long> alternating_sums;
  /// Degrees i with C^(i-1) = C^i = 0, where A^i and B^i must agree.
  std::vector<int> isomorphism_degrees;
  std::vector<int> failed_isomorphisms;

  bool exact() const;
};

LesReport les_consistency(const PlanarDiagram& d, std::size_t crossing, std::size_t cube_limit = default_cube_limit);

struct InductionResult {
  int p = 3;
  int q = 0;
  /// Normalized degrees that the exact sequence does not determine.
  std::pair<int, int> open_degrees{0, 1};
  /// Kh(P(p,-p,q)) outside the open degrees.
  BigradedGroup determined{Ring::Q};
  /// Possible values in the open degrees, ordered by (highest q first as the
  /// major key) ascending extra rank.
  std::vector<BigradedGroup> candidates;

  BigradedGroup assemble(std::size_t candidate) const;
};

/// One step of the twist-column induction: from Kh(P(p,-p,q-1)) to the part
/// of Kh(P(p,-p,q)) fixed by the exact sequence of the last crossing.
InductionResult induction_step(const BigradedGroup& base, int q, int p = 3);

/// Pick the candidate compatible with Lee homology: after reserving the two
/// survivors at (0, s +- 1), every other class must cancel against a class
/// one degree up (or down) and strictly higher (or lower) in q.
BigradedGroup resolve_candidates(const InductionResult& induction, const SInvariantResult& s, std::size_t lee_rank);
/// Feasibility of a single full table under the same rule.
bool lee_compatible(const BigradedGroup& table, int s);

struct ThinResult {
  bool thin = false;
  /// Lower of the two diagonals j - 2i when thin.
  int delta = 0;
  std::set<int> diagonals;
};

ThinResult is_thin(const BigradedGroup& g);

/// Laurent polynomial as exponent -> coefficient with no zero coefficients.
using LaurentPolynomial = std::map<int, std::int64_t>;

LaurentPolynomial graded_euler_characteristic(const BigradedGroup& g);
std::string to_string(const LaurentPolynomial& p);

/// Kh^0 = Q_(-1) + Q_(1), Kh^1 = 0, Kh^i = 0 for i < 0; or the mirrored
/// conditions.
bool validate_base_case(const BigradedGroup& g);

struct TheoremCheck {
  int q = 0;
  bool direct_ok = false;
  std::optional<std::pair<int, int>> mismatch;
  /// Empty for the base case.
  std::optional<bool> induction_ok;
  std::string error;
};

struct TheoremReport {
  int p = 3;
  int q_base = 5;
  bool base_valid = false;
  std::vector<TheoremCheck> checks;
  bool resource_limited = false;
  bool passed() const;
};

/// Direct computation against the closed form for q = base .. q_max plus
/// the induction replay between consecutive q.
TheoremReport verify_theorem(int p, int q_max, std::size_t cube_limit = default_cube_limit);

}  // namespace khx
