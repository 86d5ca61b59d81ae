#include "khx/io.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace khx {

using json = nlohmann::ordered_json;

namespace {

json factor_json(const mpz_class& f) {
  if (f.fits_slong_p()) return f.get_si();
  return f.get_str();
}

mpz_class factor_from_json(const json& v) {
  if (v.is_number_integer()) return mpz_class(v.get<long>());
  if (v.is_string()) return mpz_class(v.get<std::string>());
  throw std::invalid_argument("torsion factor must be an integer");
}

std::string ring_name(Ring r) { return r == Ring::Z ? "Z" : "Q"; }

std::string dump(const json& j) { return j.dump() + "\n"; }

}  // namespace

std::string to_json(const BigradedGroup& g) {
  json entries = json::array();
  for (const auto& [k, c] : g.cells()) {
    json t = json::array();
    for (const auto& f : c.torsion) t.push_back(factor_json(f));
    entries.push_back({{"i", k.first}, {"j", k.second}, {"free", c.free}, {"torsion", t}});
  }
  return dump({{"ring", ring_name(g.ring())}, {"entries", entries}});
}

BigradedGroup bigraded_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("homology JSON: ") + e.what());
  }
  try {
    const std::string ring = j.at("ring").get<std::string>();
    if (ring != "Z" && ring != "Q") throw std::invalid_argument("homology JSON: ring must be Z or Q");
    BigradedGroup g(ring == "Z" ? Ring::Z : Ring::Q);
    for (const auto& e : j.at("entries")) {
      HomologyCell c;
      c.free = e.at("free").get<std::size_t>();
      if (e.contains("torsion"))
        for (const auto& f : e.at("torsion")) c.torsion.push_back(factor_from_json(f));
      if (g.ring() == Ring::Q && !c.torsion.empty())
        throw std::invalid_argument("homology JSON: torsion in a rational group");
      g.set(e.at("i").get<int>(), e.at("j").get<int>(), c);
    }
    return g;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("homology JSON: ") + e.what());
  }
}

std::string cell_text(const HomologyCell& c, Ring ring) {
  std::vector<std::string> parts;
  const std::string base = ring_name(ring);
  if (c.free == 1) parts.push_back(base);
  if (c.free > 1) parts.push_back(base + "^" + std::to_string(c.free));
  // equal factors are grouped: Z_2^2
  for (std::size_t k = 0; k < c.torsion.size();) {
    std::size_t m = k;
    while (m < c.torsion.size() && c.torsion[m] == c.torsion[k]) ++m;
    std::string t = "Z_" + c.torsion[k].get_str();
    if (m - k > 1) t += "^" + std::to_string(m - k);
    parts.push_back(t);
    k = m;
  }
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "+") + p;
  return out;
}

std::string render_table(const BigradedGroup& g) {
  if (g.cells().empty()) return "0\n";
  int imin = g.cells().begin()->first.first, imax = imin;
  int jmin = g.cells().begin()->first.second, jmax = jmin;
  for (const auto& [k, c] : g.cells()) {
    imin = std::min(imin, k.first), imax = std::max(imax, k.first);
    jmin = std::min(jmin, k.second), jmax = std::max(jmax, k.second);
  }
  std::vector<int> js;
  for (int j = jmin; j <= jmax; j += 2) js.push_back(j);

  std::vector<std::vector<std::string>> grid;
  for (int i = imax; i >= imin; --i) {
    std::vector<std::string> r{std::to_string(i)};
    for (int j : js) {
      auto it = g.cells().find({i, j});
      r.push_back(it == g.cells().end() ? "" : cell_text(it->second, g.ring()));
    }
    grid.push_back(std::move(r));
  }
  std::vector<std::string> footer{""};
  for (int j : js) footer.push_back(std::to_string(j));
  grid.push_back(footer);

  std::vector<std::size_t> width(js.size() + 1, 0);
  for (const auto& r : grid)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream out;
  for (const auto& r : grid) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c == 0) line += std::string(width[0] - r[0].size(), ' ') + r[0];
      else line += " | " + r[c] + std::string(width[c] - r[c].size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

std::string to_json(const SInvariantResult& s) {
  json survivors = json::array();
  for (const auto& v : s.survivors)
    for (std::size_t m = 0; m < v.multiplicity; ++m) survivors.push_back({{"q", v.q}, {"i", v.degree}});
  return dump({{"s", s.s}, {"survivors", survivors}});
}

std::string render_text(const SInvariantResult& s) {
  std::ostringstream out;
  out << "s = " << s.s << '\n';
  for (const auto& v : s.survivors)
    for (std::size_t m = 0; m < v.multiplicity; ++m) out << "survivor: degree " << v.degree << ", q " << v.q << '\n';
  return out.str();
}

std::string to_json(const LeeRanks& r) {
  json ranks = json::array();
  for (const auto& [i, n] : r.by_degree) ranks.push_back({{"i", i}, {"rank", n}});
  return dump({{"theory", "lee"}, {"ring", "Q"}, {"ranks", ranks}, {"total", r.total()}});
}

std::string render_text(const LeeRanks& r) {
  std::ostringstream out;
  for (const auto& [i, n] : r.by_degree) out << "H^" << i << " = Q^" << n << '\n';
  out << "total rank " << r.total() << '\n';
  return out.str();
}

std::string to_json(const TheoremReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e{{"q", c.q}, {"direct", c.direct_ok}};
    e["mismatch"] = c.mismatch ? json{{"i", c.mismatch->first}, {"j", c.mismatch->second}} : json(nullptr);
    e["induction"] = c.induction_ok ? json(*c.induction_ok) : json(nullptr);
    if (!c.error.empty()) e["error"] = c.error;
    checks.push_back(e);
  }
  return dump({{"p", r.p},
               {"base_q", r.q_base},
               {"base_case_valid", r.base_valid},
               {"checks", checks},
               {"resource_limited", r.resource_limited},
               {"passed", r.passed()}});
}

std::string render_text(const TheoremReport& r) {
  std::ostringstream out;
  out << "P(" << r.p << ",-" << r.p << ",q), base q=" << r.q_base << ": base case conditions "
      << (r.base_valid ? "hold" : "FAIL") << '\n';
  for (const auto& c : r.checks) {
    out << "q=" << c.q << ": closed form " << (c.direct_ok ? "pass" : "FAIL");
    if (c.mismatch) out << " (first mismatch at i=" << c.mismatch->first << ", j=" << c.mismatch->second << ")";
    if (c.induction_ok) out << ", induction " << (*c.induction_ok ? "pass" : "FAIL");
    if (!c.error.empty()) out << ", error: " << c.error;
    out << '\n';
  }
  if (r.resource_limited) out << "stopped at the resource limit\n";
  out << (r.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

std::string to_json(const LesReport& r) {
  json sums = json::array();
  for (const auto& [j, s] : r.alternating_sums) sums.push_back({{"j", j}, {"sum", s}});
  return dump({{"crossing", r.crossing},
               {"whole", json::parse(to_json(r.whole))},
               {"zero", json::parse(to_json(r.zero))},
               {"one", json::parse(to_json(r.one))},
               {"alternating_sums", sums},
               {"isomorphism_degrees", r.isomorphism_degrees},
               {"failed_isomorphisms", r.failed_isomorphisms},
               {"exact", r.exact()}});
}

std::string render_text(const LesReport& r) {
  std::ostringstream out;
  out << "crossing " << r.crossing << "\nunnormalized homology of D:\n"
      << render_table(r.whole) << "of D(*0):\n"
      << render_table(r.zero) << "of D(*1):\n"
      << render_table(r.one);
  bool sums_ok = true;
  for (const auto& [j, s] : r.alternating_sums) sums_ok = sums_ok && s == 0;
  out << "alternating sums " << (sums_ok ? "vanish" : "DO NOT vanish") << '\n';
  out << "isomorphism degrees:";
  for (int i : r.isomorphism_degrees) out << ' ' << i;
  out << '\n';
  if (!r.failed_isomorphisms.empty()) {
    out << "failed:";
    for (int i : r.failed_isomorphisms) out << ' ' << i;
    out << '\n';
  }
  out << (r.exact() ? "consistent" : "INCONSISTENT") << '\n';
  return out.str();
}

namespace {

json cells_json(const std::map<std::pair<int, int>, std::size_t>& m) {
  json a = json::array();
  for (const auto& [k, v] : m) a.push_back({{"i", k.first}, {"q", k.second}, {"dim", v}});
  return a;
}

}  // namespace

std::string to_json(const SpectralPages& p) {
  json pages = json::array();
  for (std::size_t r = 0; r < p.pages.size(); ++r)
    pages.push_back({{"r", r + 1}, {"dims", cells_json(p.pages[r])}, {"ranks", cells_json(p.ranks[r])}});
  return dump({{"pages", pages},
               {"infinity", cells_json(p.infinity)},
               {"stabilized", p.stabilized},
               {"stable_from", p.stable_from}});
}

std::string render_text(const SpectralPages& p) {
  std::ostringstream out;
  auto as_group = [](const std::map<std::pair<int, int>, std::size_t>& m) {
    BigradedGroup g(Ring::Q);
    for (const auto& [k, v] : m) g.add_free(k.first, k.second, v);
    return g;
  };
  for (std::size_t r = 0; r < p.pages.size(); ++r) {
    if (r > 0 && p.pages[r] == p.pages[r - 1]) continue;
    out << "E_" << r + 1 << ":\n" << render_table(as_group(p.pages[r]));
  }
  out << "E_infinity:\n" << render_table(as_group(p.infinity));
  if (p.stabilized) out << "stable from page " << p.stable_from << '\n';
  else out << "not stable within the computed pages\n";
  return out.str();
}

}  // namespace khx
