// One line per acceptance criterion: PASS, FAIL or SKIP, with timings.
// `acceptance N` runs criterion N alone and exits 77 when it is skipped.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "khx/analysis.hpp"
#include "khx/cube.hpp"
#include "khx/io.hpp"
#include "oracles.hpp"

using namespace khx;

namespace {

struct Outcome {
  enum Kind { Pass, Fail, Skip } kind = Fail;
  std::string detail;
};

Outcome pass(std::string d = {}) { return {Outcome::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Fail, std::move(d)}; }

int failures = 0;
int skips = 0;
int only = 0;

void criterion(int n, const std::string& title, const std::function<Outcome()>& body) {
  if (only != 0 && n != only) return;
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const char* tag = o.kind == Outcome::Pass ? "PASS" : o.kind == Outcome::Skip ? "SKIP" : "FAIL";
  if (o.kind == Outcome::Fail) ++failures;
  if (o.kind == Outcome::Skip) ++skips;
  std::ostringstream line;
  line.precision(1);
  line << std::fixed << tag << " criterion " << n << ": " << title << " [" << secs << " s]";
  if (!o.detail.empty()) line << " " << o.detail;
  std::cout << line.str() << std::endl;
}

std::string cell_list(const BigradedGroup& g) {
  std::ostringstream out;
  for (const auto& [ij, c] : g.cells()) out << " (" << ij.first << "," << ij.second << ")=" << cell_text(c, g.ring());
  return out.str();
}

std::string diff(const BigradedGroup& want, const BigradedGroup& got) {
  return "expected" + cell_list(want) + " got" + cell_list(got);
}

BigradedGroup integral_table(std::initializer_list<std::pair<int, int>> free_cells,
                             std::initializer_list<std::pair<int, int>> z2_cells) {
  BigradedGroup g(Ring::Z);
  for (auto [i, j] : free_cells) g.add_free(i, j, 1);
  for (auto [i, j] : z2_cells) g.add_torsion(i, j, 2);
  return g;
}

Outcome integral_criterion(int q, const BigradedGroup& expected, const std::vector<std::pair<int, int>>& t_slots,
                           double budget) {
  auto t0 = std::chrono::steady_clock::now();
  // The tables print torsion where it is born as an invariant factor of the
  // outgoing differential.
  BigradedGroup h = khovanov_homology(pretzel(3, -3, q), Ring::Z, default_cube_limit, {}, TorsionPlacement::Outgoing);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto [i, j] : t_slots)
    if (!h.torsion(i, j).empty() || h.free_rank(i, j) != 0)
      return fail("T-slot (" + std::to_string(i) + "," + std::to_string(j) + ") is nonzero");
  if (!(h == expected)) return fail(diff(expected, h));
  if (secs > budget) return fail("over the time budget");
  return pass();
}

std::vector<std::array<int, 4>> tuples(const PlanarDiagram& d) {
  std::vector<std::array<int, 4>> out;
  for (const auto& c : d.crossings()) out.push_back(c.arcs);
  return out;
}

BigradedGroup flipped(const BigradedGroup& g) {
  BigradedGroup out(Ring::Q);
  for (const auto& [ij, c] : g.cells()) out.add_free(-ij.first, -ij.second, c.free);
  return out;
}

long mem_total_kb() {
  std::ifstream f("/proc/meminfo");
  std::string key;
  long value = 0;
  while (f >> key >> value) {
    if (key == "MemTotal:") return value;
    f.ignore(256, '\n');
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) only = std::stoi(argv[1]);
  criterion(1, "Kh_Q(P(3,-3,5)) equals the closed form", [] {
    BigradedGroup h = khovanov_homology(pretzel(3, -3, 5), Ring::Q);
    ClosedFormTable f = theorem1_formula(5);
    if (!(h == f.table)) return fail(diff(f.table, h));
    if (f.table.cells().size() != 10) return fail("closed form has the wrong support");
    return pass("(10 cells over 9 degrees)");
  });

  criterion(2, "Kh_Z(P(3,-3,6)) reproduces the integral table", [] {
    return integral_criterion(6,
                              integral_table({{0, -1}, {0, 1}, {3, 5}, {4, 9}, {5, 9}, {6, 11}, {6, 13}, {7, 15},
                                              {8, 15}, {9, 19}},
                                             {{3, 7}, {5, 11}, {6, 13}, {8, 17}}),
                              {{1, 1}, {1, 3}}, 60);
  });

  criterion(3, "Kh_Z(P(3,-3,7)) reproduces the integral table", [] {
    return integral_criterion(7,
                              integral_table({{0, -1}, {0, 1}, {4, 7}, {5, 11}, {6, 11}, {7, 13}, {7, 15}, {8, 17},
                                              {9, 17}, {10, 21}},
                                             {{4, 9}, {6, 13}, {7, 15}, {9, 19}}),
                              {{1, 1}, {1, 3}, {2, 3}, {2, 5}}, 300);
  });

  criterion(4, "s(P(3,-3,q)) = 0 with survivors at (0,-1), (0,1) for q = 5, 6, 7", [] {
    const std::vector<Survivor> want{{-1, 0, 1}, {1, 0, 1}};
    for (int q : {5, 6, 7}) {
      SInvariantResult r = s_invariant(pretzel(3, -3, q));
      if (r.s != 0 || r.survivors != want) return fail("q = " + std::to_string(q) + ": " + to_json(r));
    }
    return pass();
  });

  criterion(5, "Lee rank 2 for each P(3,-3,q) and 4 for the 2-component unlink", [] {
    for (int q : {5, 6, 7}) {
      LeeRanks r = lee_homology_rank(pretzel(3, -3, q));
      if (r.total() != 2) return fail("q = " + std::to_string(q) + ": " + to_json(r));
    }
    LeeRanks u = lee_homology_rank(parse_pd("O,O"));
    if (u.total() != 4) return fail("unlink: " + to_json(u));
    return pass();
  });

  criterion(6, "induction replay 5 -> 6 -> 7 reproduces the direct tables", [] {
    BigradedGroup base = khovanov_homology(pretzel(3, -3, 5), Ring::Q);
    for (int q : {6, 7}) {
      PlanarDiagram d = pretzel(3, -3, q);
      InductionResult step = induction_step(base, q);
      BigradedGroup chosen = resolve_candidates(step, s_invariant(d), lee_homology_rank(d).total());
      BigradedGroup direct = khovanov_homology(d, Ring::Q);
      if (!(chosen == direct)) return fail("q = " + std::to_string(q) + ": " + diff(direct, chosen));
      base = direct;
    }
    return pass();
  });

  criterion(7, "graded Euler characteristic equals the state sum on the corpus", [] {
    std::vector<corpus::Named> all{{"unknot", parse_pd("O")},
                                   {"unlink2", parse_pd("O,O")},
                                   {"unlink3", parse_pd("O,O,O")},
                                   {"right trefoil", parse_pd(corpus::right_trefoil)},
                                   {"left trefoil", corpus::left_trefoil()},
                                   {"figure eight", parse_pd(corpus::figure_eight)}};
    for (int q = 5; q <= 7; ++q) all.push_back({"P(3,-3," + std::to_string(q) + ")", pretzel(3, -3, q)});
    for (const auto& [name, d] : all) {
      OrientationData o = orient_and_count(d);
      oracle::Poly want = oracle::normalized_state_sum(tuples(d), d.free_circles(), o.n_plus, o.n_minus);
      LaurentPolynomial got = graded_euler_characteristic(khovanov_homology(d, Ring::Q));
      if (oracle::Poly(got.begin(), got.end()) != want) return fail(name + ": " + to_string(got));
    }
    return pass("(" + std::to_string(all.size()) + " diagrams)");
  });

  criterion(8, "property suite", []() -> Outcome {
    std::vector<corpus::Named> all = corpus::small();
    for (int q = 5; q <= 6; ++q) all.push_back({"P(3,-3," + std::to_string(q) + ")", pretzel(3, -3, q)});
    for (const auto& [name, d] : all) {
      ResolutionCube cube = build_cube(d);
      std::map<std::pair<std::uint32_t, int>, int> sign;
      for (const auto& e : cube.edges) sign[{e.from.bits, e.axis}] = e.sign;
      const int n = static_cast<int>(d.crossing_count());
      for (std::uint32_t b = 0; b < (1u << n); ++b)
        for (int x = 0; x < n; ++x)
          for (int y = x + 1; y < n; ++y) {
            if ((b >> x) & 1u || (b >> y) & 1u) continue;
            const int face = sign[{b, x}] * sign[{b | (1u << x), y}] * sign[{b, y}] * sign[{b | (1u << y), x}];
            if (face != -1) return fail(name + ": commuting face");
          }
      for (int t = 0; t < 2; ++t) {
        GradedChainComplex c = build_complex(d, t == 0 ? FrobeniusTheory::khovanov() : FrobeniusTheory::lee(), true);
        for (std::size_t k = 0; k + 1 < c.differentials.size(); ++k)
          if (!c.differentials[k + 1].multiply(c.differentials[k]).is_zero()) return fail(name + ": d o d != 0");
        for (std::size_t k = 0; k < c.differentials.size(); ++k)
          for (const auto& e : c.differentials[k].entries()) {
            const int src = c.groups[k].q[static_cast<std::size_t>(e.col)];
            const int dst = c.groups[k + 1].q[static_cast<std::size_t>(e.row)];
            if (t == 0 && dst != src) return fail(name + ": Khovanov differential changes q");
            if (t == 1 && dst < src) return fail(name + ": Lee differential lowers q");
          }
      }
    }
    for (PlanarDiagram d : {parse_pd(corpus::right_trefoil), pretzel(3, -3, 5)})
      if (!(khovanov_homology(mirror(d), Ring::Q) == flipped(khovanov_homology(d, Ring::Q))))
        return fail("mirror duality");
    const BigradedGroup unknot = khovanov_homology(parse_pd("O"), Ring::Z);
    for (const char* kink : {"X[1,2,2,1]", "X[2,1,1,2]", "X[1,1,2,2]", "X[2,2,1,1]"})
      if (!(khovanov_homology(parse_pd(kink), Ring::Z) == unknot)) return fail(std::string("kink ") + kink);
    const BigradedGroup trefoil = khovanov_homology(parse_pd(corpus::right_trefoil), Ring::Z);
    if (!(khovanov_homology(parse_pd(corpus::kinked_trefoil), Ring::Z) == trefoil)) return fail("kinked trefoil");
    return pass("(" + std::to_string(all.size()) + " diagrams, both theories)");
  });

  criterion(9, "Kh_Z(P(3,-3,q)) is thin on diagonals {-1, 1} for q = 5, 6, 7", [] {
    for (int q : {5, 6, 7}) {
      ThinResult t = is_thin(khovanov_homology(pretzel(3, -3, q), Ring::Z));
      if (!t.thin || t.diagonals != std::set<int>{-1, 1}) return fail("q = " + std::to_string(q));
    }
    return pass();
  });

  criterion(10, "Kh_Q(P(5,-5,7)) matches the general closed form off its ambiguous degrees", []() -> Outcome {
    if (mem_total_kb() < 4'500'000) return {Outcome::Skip, "(needs about 4 GB of memory)"};
    auto t0 = std::chrono::steady_clock::now();
    BigradedGroup h = khovanov_homology(pretzel(5, -5, 7), Ring::Q);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ClosedFormTable f = theorem2_formula(5, 7);
    if (auto m = first_mismatch(f, h))
      return fail("first differing cell (" + std::to_string(m->first) + "," + std::to_string(m->second) + ")");
    if (secs > 3600) return fail("over the time budget");
    std::string skipped;
    for (int a : f.ambiguous_degrees) skipped += " " + std::to_string(a);
    return pass("(ambiguous degrees" + skipped + " not compared)");
  });

  if (failures > 0) return 1;
  return only != 0 && skips > 0 ? 77 : 0;
}
