#include "khx/analysis.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace khx {

std::size_t ClosedFormTable::written_rank() const {
  std::size_t n = 0;
  for (const auto& line : lines)
    for (const auto& [q, m] : line.summands) n += static_cast<std::size_t>(std::max(m, 0));
  return n;
}

namespace {

FormulaLine line(std::string label, int degree, std::vector<std::pair<int, int>> summands) {
  return {std::move(label), degree, std::move(summands)};
}

/// Resolve lines into a table. A degree is ambiguous when lines disagree on
/// it or when it falls inside [0, top] without any line.
void resolve_lines(ClosedFormTable& t, int top) {
  std::map<int, std::vector<const FormulaLine*>> by_degree;
  for (const auto& l : t.lines) by_degree[l.degree].push_back(&l);
  auto content = [](const FormulaLine& l) {
    std::map<int, int> c;
    for (const auto& [q, m] : l.summands)
      if (m > 0) c[q] += m;
    return c;
  };
  for (const auto& [deg, ls] : by_degree) {
    bool agree = true;
    for (const auto* l : ls) agree = agree && content(*l) == content(*ls.front());
    if (!agree) {
      t.ambiguous_degrees.insert(deg);
      std::ostringstream note;
      note << "degree " << deg << " is assigned by " << ls.size() << " different lines:";
      for (const auto* l : ls) note << " [" << l->label << "]";
      t.conflicts.push_back(note.str());
      continue;
    }
    for (const auto& [q, m] : content(*ls.front())) t.table.add_free(deg, q, static_cast<std::size_t>(m));
  }
  for (int deg = 0; deg <= top; ++deg) {
    if (by_degree.count(deg)) continue;
    t.ambiguous_degrees.insert(deg);
    t.conflicts.push_back("degree " + std::to_string(deg) + " is not assigned by any line");
  }
}

}  // namespace

ClosedFormTable theorem1_formula(int q) {
  if (q < 5) throw AnalysisError("the closed form for P(3,-3,q) needs q >= 5");
  ClosedFormTable t;
  t.p = 3;
  t.q = q;
  const int s = 2 * (q - 4);
  t.lines.push_back(line("Kh^0", 0, {{-1, 1}, {1, 1}}));
  for (int i = 1; i <= q - 4; ++i) t.lines.push_back(line("Kh^i = 0", i, {}));
  t.lines.push_back(line("Kh^(q-3)", q - 3, {{1 + s, 1}}));
  t.lines.push_back(line("Kh^(q-2)", q - 2, {{5 + s, 1}}));
  t.lines.push_back(line("Kh^(q-1)", q - 1, {{5 + s, 1}}));
  t.lines.push_back(line("Kh^q", q, {{7 + s, 1}, {9 + s, 1}}));
  t.lines.push_back(line("Kh^(q+1)", q + 1, {{11 + s, 1}}));
  t.lines.push_back(line("Kh^(q+2)", q + 2, {{11 + s, 1}}));
  t.lines.push_back(line("Kh^(q+3)", q + 3, {{15 + s, 1}}));
  resolve_lines(t, q + 3);
  return t;
}

ClosedFormTable theorem2_formula(int p, int q) {
  if (p < 3 || p % 2 == 0) throw AnalysisError("p must be odd and at least 3");
  if (q < p + 2) throw AnalysisError("q must be at least p + 2");
  ClosedFormTable t;
  t.p = p;
  t.q = q;
  const int s = 2 * (q - p - 2);
  const int n = (p - 1) / 2;
  t.lines.push_back(line("Kh^0", 0, {{-1, 1}, {1, 1}}));
  for (int i = 1; i <= q - p - 1; ++i) t.lines.push_back(line("Kh^i = 0", i, {}));
  t.lines.push_back(line("Kh^(q-p)", q - p, {{3 + s, 1}}));
  t.lines.push_back(line("Kh^(q-p+1)", q - p + 1, {{7 + s, 1}}));
  for (int i = 2; i <= n; ++i) {
    t.lines.push_back(line("Kh^(q-p-2+2i), i=" + std::to_string(i), q - p - 2 + 2 * i,
                           {{4 * i - 1 + s, i}, {4 * i + 1 + s, i - 2}}));
    t.lines.push_back(line("Kh^(q-p-2+2i+1), i=" + std::to_string(i), q - p - 2 + 2 * i + 1,
                           {{4 * i + 1 + s, i - 1}, {4 * i + 3 + s, i}}));
  }
  t.lines.push_back(line("Kh^(q-1)", q - 1, {{2 * p + 1 + s, n}, {2 * p + 3 + s, n - 1}}));
  t.lines.push_back(line("Kh^q", q, {{2 * p + 3 + s, n}, {2 * p + 5 + s, n}}));
  // Printed with the same degree label as the earlier Kh^(q-p+1) line.
  t.lines.push_back(line("Kh^(q-p+1), second", q - p + 1, {{2 * p + 5 + s, n - 1}, {2 * p + 7 + s, n}}));
  for (int i = 2; i <= n; ++i) {
    t.lines.push_back(line("Kh^(q+p+1-2i), i=" + std::to_string(i), q + p + 1 - 2 * i,
                           {{4 * p + 5 - 4 * i + s, i}, {4 * p + 7 - 4 * i + s, i - 1}}));
    t.lines.push_back(line("Kh^(q+p+2-2i), i=" + std::to_string(i), q + p + 2 - 2 * i,
                           {{4 * p + 7 - 4 * i + s, i - 2}, {4 * p + 9 - 4 * i + s, i}}));
  }
  t.lines.push_back(line("Kh^(q+p-1)", q + p - 1, {{4 * p + 1 + s, 1}}));
  t.lines.push_back(line("Kh^(q+p)", q + p, {{4 * p + 5 + s, 1}}));
  resolve_lines(t, q + p);
  return t;
}

std::optional<std::pair<int, int>> first_mismatch(const ClosedFormTable& formula, const BigradedGroup& computed) {
  std::set<std::pair<int, int>> keys;
  for (const auto& [k, c] : formula.table.cells()) keys.insert(k);
  for (const auto& [k, c] : computed.cells())
    if (c.free > 0) keys.insert(k);
  for (const auto& k : keys) {
    if (formula.ambiguous_degrees.count(k.first)) continue;
    if (formula.table.free_rank(k.first, k.second) != computed.free_rank(k.first, k.second)) return k;
  }
  return std::nullopt;
}

bool LesReport::exact() const {
  return failed_isomorphisms.empty() &&
         std::all_of(alternating_sums.begin(), alternating_sums.end(), [](const auto& kv) { return kv.second == 0; });
}

namespace {

BigradedGroup unnormalized_q(const PlanarDiagram& d, std::size_t cube_limit) {
  return compute_homology(build_complex(d, FrobeniusTheory::khovanov(Ring::Q), false, cube_limit), Ring::Q);
}

std::set<int> degrees_of(const BigradedGroup& g) {
  std::set<int> out;
  for (const auto& [k, c] : g.cells())
    if (c.free > 0) out.insert(k.first);
  return out;
}

/// Free ranks in degree i, keyed by q.
std::map<int, std::size_t> row(const BigradedGroup& g, int i) {
  std::map<int, std::size_t> out;
  for (const auto& [k, c] : g.cells())
    if (k.first == i && c.free > 0) out[k.second] = c.free;
  return out;
}

}  // namespace

LesReport les_consistency(const PlanarDiagram& d, std::size_t crossing, std::size_t cube_limit) {
  check_cube_limit(d, cube_limit);
  if (crossing >= d.crossing_count()) throw AnalysisError("crossing index out of range");
  LesReport r;
  r.crossing = static_cast<int>(crossing);
  r.whole = unnormalized_q(d, cube_limit);
  r.zero = unnormalized_q(smooth_crossing(d, crossing, 0).diagram, cube_limit);
  r.one = unnormalized_q(smooth_crossing(d, crossing, 1).diagram, cube_limit);
  const BigradedGroup a = r.one.shifted(1, 1);

  std::set<int> js;
  for (const BigradedGroup* g : std::initializer_list<const BigradedGroup*>{&r.whole, &r.zero, &a})
    for (const auto& [k, c] : g->cells()) js.insert(k.second);
  for (int j : js) {
    long sum = 0;
    auto add = [&](const BigradedGroup& g, long sign) {
      for (const auto& [k, c] : g.cells())
        if (k.second == j) sum += (k.first % 2 == 0 ? sign : -sign) * static_cast<long>(c.free);
    };
    add(a, 1);
    add(r.whole, -1);
    add(r.zero, 1);
    r.alternating_sums[j] = sum;
  }

  const std::set<int> c_degrees = degrees_of(r.zero);
  for (int i = -1; i <= static_cast<int>(d.crossing_count()) + 1; ++i) {
    if (c_degrees.count(i - 1) || c_degrees.count(i)) continue;
    r.isomorphism_degrees.push_back(i);
    if (row(a, i) != row(r.whole, i)) r.failed_isomorphisms.push_back(i);
  }
  return r;
}

BigradedGroup InductionResult::assemble(std::size_t candidate) const {
  BigradedGroup out = determined;
  for (const auto& [k, c] : candidates.at(candidate).cells()) out.add_free(k.first, k.second, c.free);
  return out;
}

InductionResult induction_step(const BigradedGroup& base, int q, int p) {
  if (p < 3 || p % 2 == 0) throw AnalysisError("p must be odd and at least 3");
  const PlanarDiagram d = pretzel(p, -p, q);
  const std::size_t last = d.crossing_count() - 1;
  const SmoothedDiagram d0 = smooth_crossing(d, last, 0);
  const SmoothedDiagram d1 = smooth_crossing(d, last, 1);
  if (d0.diagram.component_count() != 2) throw AnalysisError("the 0-smoothing of the last crossing is not a 2-component link");
  if (d1.diagram.component_count() != 1) throw AnalysisError("the 1-smoothing of the last crossing is not a knot");
  const OrientationData od = orient_and_count(d);
  const OrientationData o0 = orient_and_count(d0.diagram);
  const OrientationData o1 = orient_and_count(d1.diagram);

  // Unnormalized homology of the two smoothings, assuming D(*0) is a
  // 2-component unlink and D(*1) carries `base`.
  const BigradedGroup unlink = khovanov_homology(PlanarDiagram({}, 2), Ring::Q);
  const BigradedGroup c = unlink.shifted(o0.n_minus, -(o0.n_plus - 2 * o0.n_minus));
  const BigradedGroup a = base.rational().shifted(o1.n_minus, -(o1.n_plus - 2 * o1.n_minus)).shifted(1, 1);

  const std::set<int> c_degrees = degrees_of(c);
  if (c_degrees.size() != 1) throw AnalysisError("unlink homology is not concentrated in one degree");
  const int ic = *c_degrees.begin();
  if (!row(a, ic).empty())
    throw AnalysisError("base homology is nonzero where the exact sequence needs it to vanish (degree " +
                        std::to_string(ic - 1 - o1.n_minus) + " of the base)");

  const int h = -od.n_minus;
  const int dq = od.n_plus - 2 * od.n_minus;
  InductionResult out;
  out.p = p;
  out.q = q;
  out.open_degrees = {ic + h, ic + 1 + h};
  for (const auto& [k, cell] : a.cells()) {
    if (k.first == ic || k.first == ic + 1) continue;
    out.determined.add_free(k.first + h, k.second + dq, cell.free);
  }

  const std::map<int, std::size_t> cj = row(c, ic);
  const std::map<int, std::size_t> aj = row(a, ic + 1);
  std::set<int> js;
  for (const auto& [j, n] : cj) js.insert(j);
  for (const auto& [j, n] : aj) js.insert(j);
  struct Range {
    int j;
    std::size_t lo, hi, a, c;
  };
  std::vector<Range> ranges;  // highest j first: it is the major key
  for (auto it = js.rbegin(); it != js.rend(); ++it) {
    const std::size_t cv = cj.count(*it) ? cj.at(*it) : 0;
    const std::size_t av = aj.count(*it) ? aj.at(*it) : 0;
    ranges.push_back({*it, cv > av ? cv - av : 0, cv, av, cv});
  }
  std::vector<std::size_t> pick(ranges.size());
  for (std::size_t k = 0; k < ranges.size(); ++k) pick[k] = ranges[k].lo;
  while (true) {
    BigradedGroup cand(Ring::Q);
    for (std::size_t k = 0; k < ranges.size(); ++k) {
      const Range& r = ranges[k];
      cand.add_free(ic + h, r.j + dq, pick[k]);
      cand.add_free(ic + 1 + h, r.j + dq, r.a - r.c + pick[k]);
    }
    out.candidates.push_back(std::move(cand));
    // Advance the least significant position (lowest j) first.
    bool advanced = false;
    for (std::size_t k = ranges.size(); k-- > 0;) {
      if (pick[k] < ranges[k].hi) {
        ++pick[k];
        for (std::size_t m = k + 1; m < ranges.size(); ++m) pick[m] = ranges[m].lo;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

bool lee_compatible(const BigradedGroup& table, int s) {
  std::map<std::pair<int, int>, std::size_t> units;
  for (const auto& [k, c] : table.cells())
    if (c.free > 0) units[k] = c.free;
  for (int j : {s - 1, s + 1}) {
    auto it = units.find({0, j});
    if (it == units.end() || it->second == 0) return false;
    --it->second;
  }
  std::vector<std::pair<int, int>> even, odd;
  for (const auto& [k, n] : units)
    for (std::size_t m = 0; m < n; ++m) ((k.first % 2 == 0) ? even : odd).push_back(k);
  if (even.size() != odd.size()) return false;
  auto joined = [](std::pair<int, int> x, std::pair<int, int> y) {
    return (y.first == x.first + 1 && y.second > x.second) || (y.first == x.first - 1 && y.second < x.second);
  };
  std::vector<int> match(odd.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t u, std::vector<bool>& seen) {
    for (std::size_t v = 0; v < odd.size(); ++v) {
      if (seen[v] || !joined(even[u], odd[v])) continue;
      seen[v] = true;
      if (match[v] < 0 || augment(static_cast<std::size_t>(match[v]), seen)) {
        match[v] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < even.size(); ++u) {
    std::vector<bool> seen(odd.size(), false);
    if (!augment(u, seen)) return false;
  }
  return true;
}

BigradedGroup resolve_candidates(const InductionResult& induction, const SInvariantResult& s, std::size_t lee_rank) {
  if (lee_rank != 2) throw AnalysisError("candidate resolution needs a knot: Lee rank " + std::to_string(lee_rank));
  if (induction.candidates.empty()) throw AnalysisError("no candidates to resolve");
  if (induction.candidates.size() == 1) return induction.assemble(0);
  std::vector<std::size_t> feasible;
  for (std::size_t k = 0; k < induction.candidates.size(); ++k)
    if (lee_compatible(induction.assemble(k), s.s)) feasible.push_back(k);
  if (feasible.empty()) throw AnalysisError("no candidate is compatible with the Lee spectral sequence");
  if (feasible.size() > 1)
    throw AnalysisError(std::to_string(feasible.size()) + " candidates remain compatible with the Lee spectral sequence");
  return induction.assemble(feasible.front());
}

ThinResult is_thin(const BigradedGroup& g) {
  ThinResult r;
  for (const auto& [k, c] : g.cells())
    if (!c.empty()) r.diagonals.insert(k.second - 2 * k.first);
  if (r.diagonals.empty()) {
    r.thin = true;
    return r;
  }
  r.delta = *r.diagonals.begin();
  r.thin = *r.diagonals.rbegin() - r.delta <= 2;
  return r;
}

LaurentPolynomial graded_euler_characteristic(const BigradedGroup& g) {
  LaurentPolynomial out;
  for (const auto& [k, c] : g.cells()) {
    const auto v = static_cast<std::int64_t>(c.free);
    out[k.second] += (k.first % 2 == 0) ? v : -v;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

std::string to_string(const LaurentPolynomial& p) {
  if (p.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    const auto [e, c] = *it;
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << '-';
    const std::int64_t a = c < 0 ? -c : c;
    if (a != 1 || e == 0) out << a;
    if (e != 0) out << "q";
    if (e != 0 && e != 1) out << '^' << e;
    first = false;
  }
  return out.str();
}

bool validate_base_case(const BigradedGroup& g) {
  const std::map<int, std::size_t> kh0 = row(g, 0);
  if (kh0 != std::map<int, std::size_t>{{-1, 1}, {1, 1}}) return false;
  const std::set<int> degs = degrees_of(g);
  const bool plain = !degs.count(1) && std::none_of(degs.begin(), degs.end(), [](int i) { return i < 0; });
  const bool mirrored = !degs.count(-1) && std::none_of(degs.begin(), degs.end(), [](int i) { return i > 0; });
  return plain || mirrored;
}

bool TheoremReport::passed() const {
  if (!base_valid || resource_limited || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const TheoremCheck& c) {
    return c.direct_ok && c.induction_ok.value_or(true) && c.error.empty();
  });
}

TheoremReport verify_theorem(int p, int q_max, std::size_t cube_limit) {
  if (p < 3 || p % 2 == 0) throw AnalysisError("p must be odd and at least 3");
  TheoremReport report;
  report.p = p;
  report.q_base = p + 2;
  if (q_max < report.q_base) throw AnalysisError("qmax must be at least " + std::to_string(report.q_base));
  BigradedGroup previous;
  for (int q = report.q_base; q <= q_max; ++q) {
    TheoremCheck check;
    check.q = q;
    try {
      const PlanarDiagram d = pretzel(p, -p, q);
      const BigradedGroup kh = khovanov_homology(d, Ring::Q, cube_limit);
      const ClosedFormTable formula = p == 3 ? theorem1_formula(q) : theorem2_formula(p, q);
      check.mismatch = first_mismatch(formula, kh);
      check.direct_ok = !check.mismatch;
      if (q == report.q_base) {
        report.base_valid = validate_base_case(kh);
      } else {
        const InductionResult step = induction_step(previous, q, p);
        const SInvariantResult s = s_invariant(d, cube_limit);
        const std::size_t rank = lee_homology_rank(d, cube_limit).total();
        check.induction_ok = resolve_candidates(step, s, rank) == kh;
      }
      previous = kh;
    } catch (const ResourceLimitError& e) {
      check.error = e.what();
      report.checks.push_back(check);
      report.resource_limited = true;
      break;
    } catch (const AnalysisError& e) {
      check.error = e.what();
      check.induction_ok = false;
    } catch (const LeeConsistencyError& e) {
      check.error = e.what();
      check.induction_ok = false;
    }
    report.checks.push_back(check);
  }
  return report;
}

}  // namespace khx
