#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"
#include "khx/analysis.hpp"
#include "oracles.hpp"

using namespace khx;

namespace {

std::vector<std::array<int, 4>> tuples(const PlanarDiagram& d) {
  std::vector<std::array<int, 4>> out;
  for (const auto& c : d.crossings()) out.push_back(c.arcs);
  return out;
}

}  // namespace

TEST_CASE("closed form for P(3,-3,5)") {
  ClosedFormTable f = theorem1_formula(5);
  CHECK(f.ambiguous_degrees.empty());
  BigradedGroup expected(Ring::Q);
  for (auto [i, j] : std::vector<std::pair<int, int>>{
           {0, -1}, {0, 1}, {2, 3}, {3, 7}, {4, 7}, {5, 9}, {5, 11}, {6, 13}, {7, 13}, {8, 17}})
    expected.add_free(i, j, 1);
  CHECK(f.table == expected);
  CHECK(f.written_rank() == 10);
  CHECK(f.lines.size() == 9);
}

TEST_CASE("each twist shifts the upper part by (1, 2)") {
  for (int q = 6; q <= 9; ++q) {
    CAPTURE(q);
    ClosedFormTable a = theorem1_formula(q - 1), b = theorem1_formula(q);
    BigradedGroup upper(Ring::Q), moved(Ring::Q);
    for (const auto& [ij, c] : b.table.cells())
      if (ij.first >= 2) upper.add_free(ij.first, ij.second, c.free);
    for (const auto& [ij, c] : a.table.cells())
      if (ij.first >= 2) moved.add_free(ij.first + 1, ij.second + 2, c.free);
    CHECK(upper == moved);
    CHECK(b.table.total_free_rank() == 10);
  }
}

TEST_CASE("general closed form") {
  for (int q : {5, 6, 7, 8}) {
    CAPTURE(q);
    ClosedFormTable g = theorem2_formula(3, q), t = theorem1_formula(q);
    CHECK(g.ambiguous_degrees == std::set<int>{q - 2, q + 1});
    CHECK_FALSE(g.conflicts.empty());
    for (const auto& [ij, c] : t.table.cells())
      if (!g.ambiguous_degrees.contains(ij.first)) CHECK(g.table.free_rank(ij.first, ij.second) == c.free);
  }
  ClosedFormTable f = theorem2_formula(5, 7);
  CHECK(f.ambiguous_degrees == std::set<int>{3, 8});
  CHECK(f.table.free_rank(0, -1) == 1);
  CHECK(f.table.free_rank(0, 1) == 1);

  CHECK_THROWS_AS(theorem1_formula(4), AnalysisError);
  CHECK_THROWS_AS(theorem2_formula(4, 7), AnalysisError);
  CHECK_THROWS_AS(theorem2_formula(5, 6), AnalysisError);
  CHECK_THROWS_AS(theorem2_formula(1, 5), AnalysisError);
}

TEST_CASE("first mismatch") {
  ClosedFormTable f = theorem1_formula(5);
  CHECK_FALSE(first_mismatch(f, f.table).has_value());
  BigradedGroup off = f.table;
  off.add_free(4, 11, 1);
  CHECK(first_mismatch(f, off) == std::pair<int, int>{4, 11});
}

TEST_CASE("exact sequence bookkeeping at every crossing") {
  std::vector<corpus::Named> all{{"right trefoil", parse_pd(corpus::right_trefoil)},
                                 {"figure eight", parse_pd(corpus::figure_eight)},
                                 {"hopf", parse_pd(corpus::hopf)}};
  for (const auto& [name, d] : all)
    for (std::size_t x = 0; x < d.crossing_count(); ++x) {
      CAPTURE(name);
      CAPTURE(x);
      LesReport r = les_consistency(d, x);
      CHECK(r.crossing == static_cast<int>(x));
      CHECK(r.exact());
      for (const auto& [j, s] : r.alternating_sums) CHECK(s == 0);
      CHECK(r.failed_isomorphisms.empty());
    }
  LesReport p = les_consistency(pretzel(3, -3, 5), 10);
  CHECK(p.exact());
  CHECK_FALSE(p.isomorphism_degrees.empty());
  // Smoothing the last twist one way leaves the 2-component unlink.
  CHECK(p.zero.total_free_rank() == 4);
  CHECK_THROWS(les_consistency(pretzel(3, -3, 5), 11));

  LesReport six = les_consistency(pretzel(3, -3, 6), 11);
  CHECK(six.exact());
  CHECK(six.failed_isomorphisms.empty());
  std::set<int> zero_degrees;
  for (const auto& [ij, c] : six.zero.cells()) zero_degrees.insert(ij.first);
  CHECK(zero_degrees.size() == 1);
  CHECK(six.zero.total_free_rank() == 4);
}

TEST_CASE("induction from q = 5 to q = 6") {
  BigradedGroup base = theorem1_formula(5).table;
  InductionResult step = induction_step(base, 6);
  CHECK(step.open_degrees == std::pair<int, int>{0, 1});
  REQUIRE(step.candidates.size() == 4);
  // The first candidate is the one the argument aims for.
  const BigradedGroup& first = step.candidates.front();
  CHECK(first.degree_rank(0) == 2);
  CHECK(first.free_rank(0, -1) == 1);
  CHECK(first.free_rank(0, 1) == 1);
  CHECK(first.degree_rank(1) == 0);
  for (const auto& c : step.candidates) {
    CHECK(c.free_rank(0, -1) >= 1);
    CHECK(c.free_rank(0, 1) >= 1);
  }
  // Away from the open degrees the step is the closed form.
  ClosedFormTable next = theorem1_formula(6);
  for (const auto& [ij, c] : next.table.cells())
    if (ij.first != 0 && ij.first != 1) CHECK(step.determined.free_rank(ij.first, ij.second) == c.free);
  for (std::size_t k = 1; k < step.candidates.size(); ++k)
    CHECK(step.candidates[k].total_free_rank() >= step.candidates[k - 1].total_free_rank());

  SInvariantResult s;
  s.s = 0;
  BigradedGroup chosen = resolve_candidates(step, s, 2);
  CHECK(chosen == theorem1_formula(6).table);
  CHECK(lee_compatible(chosen, 0));
  CHECK_FALSE(lee_compatible(step.assemble(step.candidates.size() - 1), 0));

  CHECK_THROWS_AS(resolve_candidates(step, s, 4), AnalysisError);
  s.s = 6;
  CHECK_THROWS_AS(resolve_candidates(step, s, 2), AnalysisError);
  CHECK_THROWS_AS(induction_step(base, 6, 4), AnalysisError);
}

TEST_CASE("thinness") {
  ThinResult t = is_thin(khovanov_homology(parse_pd(corpus::right_trefoil), Ring::Z));
  CHECK(t.thin);
  CHECK(t.diagonals == std::set<int>{1, 3});
  CHECK(t.delta == 1);
  ThinResult f = is_thin(khovanov_homology(parse_pd(corpus::figure_eight), Ring::Z));
  CHECK(f.thin);
  CHECK(f.diagonals == std::set<int>{-1, 1});

  BigradedGroup wide(Ring::Q);
  wide.add_free(0, 1, 1);
  wide.add_free(0, 5, 1);
  CHECK_FALSE(is_thin(wide).thin);
  BigradedGroup apart(Ring::Q);
  apart.add_free(0, 1, 1);
  apart.add_free(1, 7, 1);
  CHECK_FALSE(is_thin(apart).thin);
}

TEST_CASE("graded Euler characteristic matches the state sum") {
  std::vector<corpus::Named> all = corpus::small();
  all.push_back({"P(3,-3,5)", pretzel(3, -3, 5)});
  for (const auto& [name, d] : all) {
    CAPTURE(name);
    OrientationData o = orient_and_count(d);
    oracle::Poly expected = oracle::normalized_state_sum(tuples(d), d.free_circles(), o.n_plus, o.n_minus);
    LaurentPolynomial got = graded_euler_characteristic(khovanov_homology(d, Ring::Z));
    CHECK(oracle::Poly(got.begin(), got.end()) == expected);
  }
  CHECK(to_string(LaurentPolynomial{{-1, 1}, {1, 1}}) == "q + q^-1");
  CHECK(to_string(LaurentPolynomial{{0, -2}, {3, 1}}) == "q^3 - 2");
  CHECK(to_string(LaurentPolynomial{}) == "0");
}

TEST_CASE("base case conditions") {
  CHECK(validate_base_case(theorem1_formula(5).table));
  BigradedGroup m(Ring::Q);
  const ClosedFormTable base = theorem1_formula(5);
  for (const auto& [ij, c] : base.table.cells()) m.add_free(-ij.first, -ij.second, c.free);
  CHECK(validate_base_case(m));
  CHECK_FALSE(validate_base_case(khovanov_homology(parse_pd(corpus::right_trefoil), Ring::Q)));
  CHECK_FALSE(validate_base_case(khovanov_homology(parse_pd(corpus::figure_eight), Ring::Q)));
}

TEST_CASE("theorem replay for q = 5, 6") {
  TheoremReport r = verify_theorem(3, 6);
  CHECK(r.passed());
  CHECK(r.base_valid);
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].direct_ok);
  CHECK_FALSE(r.checks[0].induction_ok.has_value());
  CHECK(r.checks[1].induction_ok == true);
  CHECK_THROWS_AS(verify_theorem(2, 6), AnalysisError);
  TheoremReport limited = verify_theorem(3, 6, 11);
  CHECK(limited.resource_limited);
  CHECK_FALSE(limited.passed());
}
