#pragma once

#include <string>
#include <string_view>

#include "khx/analysis.hpp"
#include "khx/homology.hpp"
#include "khx/lee.hpp"

namespace khx {

/// {"ring":"Z","entries":[{"i":3,"j":7,"free":0,"torsion":[2]}, ...]}
std::string to_json(const BigradedGroup& g);
BigradedGroup bigraded_from_json(std::string_view text);

/// Grid with homological degree descending down the rows and q ascending
/// (step 2) across the columns; q labels on the last line.
std::string render_table(const BigradedGroup& g);
/// Cell text such as `Z`, `Z^2+Z_2`, `Q^3`; empty for an empty cell.
std::string cell_text(const HomologyCell& c, Ring ring);

/// {"s":0,"survivors":[{"q":-1,"i":0},{"q":1,"i":0}]}
std::string to_json(const SInvariantResult& s);
std::string to_json(const LeeRanks& r);
std::string to_json(const TheoremReport& r);
std::string to_json(const LesReport& r);
std::string to_json(const SpectralPages& p);

std::string render_text(const SInvariantResult& s);
std::string render_text(const LeeRanks& r);
std::string render_text(const TheoremReport& r);
std::string render_text(const LesReport& r);
std::string render_text(const SpectralPages& p);

}  // namespace khx
