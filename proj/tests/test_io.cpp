#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corpus.hpp"
#include "json.hpp"
#include "khx/io.hpp"

using namespace khx;

TEST_CASE("homology JSON round trip") {
  BigradedGroup h = khovanov_homology(parse_pd(corpus::right_trefoil), Ring::Z);
  std::string text = to_json(h);
  CHECK(text ==
        R"({"ring":"Z","entries":[{"i":0,"j":1,"free":1,"torsion":[]},{"i":0,"j":3,"free":1,"torsion":[]},)"
        R"({"i":2,"j":5,"free":1,"torsion":[]},{"i":3,"j":7,"free":0,"torsion":[2]},)"
        R"({"i":3,"j":9,"free":1,"torsion":[]}]})"
        "\n");
  CHECK(bigraded_from_json(text) == h);

  BigradedGroup q = khovanov_homology(pretzel(3, -3, 5), Ring::Q);
  CHECK(bigraded_from_json(to_json(q)) == q);
  CHECK_THROWS(bigraded_from_json("{\"ring\":\"R\",\"entries\":[]}"));
  CHECK_THROWS(bigraded_from_json("not json"));
}

TEST_CASE("cell text") {
  HomologyCell c;
  CHECK(cell_text(c, Ring::Z).empty());
  c.free = 1;
  CHECK(cell_text(c, Ring::Z) == "Z");
  CHECK(cell_text(c, Ring::Q) == "Q");
  c.free = 3;
  CHECK(cell_text(c, Ring::Q) == "Q^3");
  c.free = 1;
  c.torsion = {2};
  CHECK(cell_text(c, Ring::Z) == "Z+Z_2");
  c.free = 0;
  c.torsion = {2, 2};
  CHECK(cell_text(c, Ring::Z) == "Z_2^2");
  c.torsion = {2, 4};
  CHECK(cell_text(c, Ring::Z) == "Z_2+Z_4");
}

TEST_CASE("table layout") {
  BigradedGroup h = khovanov_homology(parse_pd(corpus::right_trefoil), Ring::Z);
  std::string table = render_table(h);
  CHECK(table ==
        "3 |   |   |   | Z_2 | Z\n"
        "2 |   |   | Z |     |\n"
        "1 |   |   |   |     |\n"
        "0 | Z | Z |   |     |\n"
        "  | 1 | 3 | 5 | 7   | 9\n");
}

TEST_CASE("Lee and report documents are valid JSON") {
  SInvariantResult s = s_invariant(parse_pd(corpus::right_trefoil));
  CHECK(to_json(s) == R"({"s":2,"survivors":[{"q":1,"i":0},{"q":3,"i":0}]})"
                         "\n");
  auto ranks = nlohmann::json::parse(to_json(lee_homology_rank(parse_pd("O,O"))));
  CHECK(ranks.is_object());
  auto les = nlohmann::json::parse(to_json(les_consistency(parse_pd(corpus::right_trefoil), 0)));
  CHECK(les.is_object());
  auto pages = nlohmann::json::parse(to_json(spectral_pages(parse_pd(corpus::right_trefoil), 8)));
  CHECK(pages.is_object());
  CHECK_FALSE(render_text(s).empty());
  CHECK(render_text(s).back() == '\n');
}
