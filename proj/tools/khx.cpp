// khx: command-line front end.
//
// Exit codes: 0 success, 1 a verification failed or an internal
// consistency check tripped, 2 bad input, 3 resource limit.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "khx/analysis.hpp"
#include "khx/io.hpp"

namespace {

using namespace khx;

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

struct InputOptions {
  std::string pd;
  std::string pretzel;
  std::string file;
  std::size_t cube_limit = default_cube_limit;
  std::string orientation;
};

void add_input(CLI::App* sub, InputOptions& in) {
  auto* group = sub->add_option_group("input", "diagram to work on");
  group->add_option("--pd", in.pd, "PD code, e.g. \"X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]\"");
  group->add_option("--pretzel", in.pretzel, "pretzel parameters p1,p2,p3");
  group->add_option("--input", in.file, "file holding a PD code, P(a,b,c) or diagram JSON");
  group->require_option(1);
  sub->add_option("--cube-limit", in.cube_limit, "refuse diagrams with more crossings than this")
      ->capture_default_str();
}

void add_orientation(CLI::App* sub, InputOptions& in) {
  sub->add_option("--orientation", in.orientation,
                  "one + or - per component, comma separated; - reverses the default direction");
}

PlanarDiagram load(const InputOptions& in) {
  if (!in.pd.empty()) return parse_pd(in.pd);
  if (!in.pretzel.empty()) return parse_diagram("P(" + in.pretzel + ")");
  std::ifstream f(in.file);
  if (!f) throw DiagramError("cannot read " + in.file);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_diagram(buf.str());
}

std::vector<bool> parse_orientation(const std::string& text, const PlanarDiagram& d) {
  std::vector<bool> reverse;
  if (text.empty()) return reverse;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok == "+") reverse.push_back(false);
    else if (tok == "-") reverse.push_back(true);
    else throw DiagramError("orientation entries must be + or -, got '" + tok + "'");
  }
  if (static_cast<int>(reverse.size()) != d.strand_component_count())
    throw DiagramError("orientation lists " + std::to_string(reverse.size()) + " components, the diagram has " +
                       std::to_string(d.strand_component_count()));
  return reverse;
}

int run(int argc, char** argv) {
  CLI::App app{"Khovanov homology, Lee homology and the Rasmussen invariant of link diagrams"};
  app.require_subcommand(1);

  InputOptions in;
  std::string ring = "Z", theory = "khovanov", format = "table", torsion = "incoming";
  bool unnormalized = false;

  auto* compute = app.add_subcommand("compute", "bigraded homology of a diagram");
  add_input(compute, in);
  add_orientation(compute, in);
  auto* ring_opt = compute->add_option("--ring", ring, "coefficients")->check(CLI::IsMember({"Z", "Q"}));
  compute->add_option("--theory", theory, "khovanov or lee")->check(CLI::IsMember({"khovanov", "lee"}));
  compute->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
  compute->add_option("--torsion", torsion, "torsion in H^i from d^(i-1) (incoming) or from d^i (outgoing)")
      ->check(CLI::IsMember({"incoming", "outgoing"}));
  compute->add_flag("--unnormalized", unnormalized, "skip the [-n-]{n+ - 2n-} shift");

  std::string s_format = "text";
  auto* s_cmd = app.add_subcommand("s", "Rasmussen invariant of a knot");
  add_input(s_cmd, in);
  s_cmd->add_option("--format", s_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  int p = 0, q_max = 0;
  std::size_t verify_limit = default_cube_limit;
  std::string v_format = "text";
  auto* verify = app.add_subcommand("verify", "check the closed form for P(p,-p,q) and replay the induction");
  verify->add_option("--p", p, "odd twist count p >= 3")->required();
  verify->add_option("--qmax", q_max, "largest q to check")->required();
  verify->add_option("--cube-limit", verify_limit)->capture_default_str();
  verify->add_option("--format", v_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* cube = app.add_subcommand("cube", "list the resolution cube: vertices with circle counts, edges");
  add_input(cube, in);

  std::string c_theory = "khovanov";
  auto* complex = app.add_subcommand("complex", "dump the chain complex: generators, q histograms, matrices");
  add_input(complex, in);
  add_orientation(complex, in);
  complex->add_option("--theory", c_theory)->check(CLI::IsMember({"khovanov", "lee"}));
  complex->add_flag("--unnormalized", unnormalized);

  int crossing = -1;
  std::string l_format = "text";
  auto* les = app.add_subcommand("les", "check the long exact sequence of one crossing");
  add_input(les, in);
  les->add_option("--crossing", crossing, "crossing index (default: the last one)");
  les->add_option("--format", l_format)->check(CLI::IsMember({"text", "json"}));

  int max_r = 64;
  std::string p_format = "text";
  auto* pages = app.add_subcommand("pages", "pages of the Lee spectral sequence of a knot");
  add_input(pages, in);
  pages->add_option("--max-r", max_r, "last page to compute")->capture_default_str();
  pages->add_option("--format", p_format)->check(CLI::IsMember({"text", "json"}));

  auto* euler = app.add_subcommand("euler", "graded Euler characteristic of Khovanov homology");
  add_input(euler, in);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (*verify) {
    TheoremReport r = verify_theorem(p, q_max, verify_limit);
    std::cout << (v_format == "json" ? to_json(r) : render_text(r));
    if (r.resource_limited) return kExitResource;
    return r.passed() ? 0 : kExitFailure;
  }

  const PlanarDiagram d = load(in);
  check_cube_limit(d, in.cube_limit);

  if (*compute) {
    const std::vector<bool> reverse = parse_orientation(in.orientation, d);
    if (theory == "lee") {
      if (ring_opt->count() > 0 && ring == "Z") throw std::invalid_argument("Lee theory is only defined over Q");
      LeeRanks r = lee_homology_rank(d, in.cube_limit, reverse);
      std::cout << (format == "json" ? to_json(r) : render_text(r));
      return 0;
    }
    const Ring R = ring == "Z" ? Ring::Z : Ring::Q;
    const TorsionPlacement placement = torsion == "outgoing" ? TorsionPlacement::Outgoing : TorsionPlacement::Incoming;
    BigradedGroup h =
        unnormalized
            ? compute_homology(build_complex(d, FrobeniusTheory::khovanov(R), false, in.cube_limit, reverse), R,
                               placement)
            : khovanov_homology(d, R, in.cube_limit, reverse, placement);
    std::cout << (format == "json" ? to_json(h) : render_table(h));
    return 0;
  }
  if (*s_cmd) {
    SInvariantResult s = s_invariant(d, in.cube_limit);
    std::cout << (s_format == "json" ? to_json(s) : render_text(s));
    return 0;
  }
  if (*cube) {
    std::cout << dump_cube(build_cube(d, in.cube_limit));
    return 0;
  }
  if (*complex) {
    const FrobeniusTheory t = c_theory == "lee" ? FrobeniusTheory::lee(Ring::Q) : FrobeniusTheory::khovanov(Ring::Z);
    std::cout << dump_complex(
        build_complex(d, t, !unnormalized, in.cube_limit, parse_orientation(in.orientation, d)));
    return 0;
  }
  if (*les) {
    if (d.crossing_count() == 0) throw DiagramError("the diagram has no crossings");
    const std::size_t k = crossing < 0 ? d.crossing_count() - 1 : static_cast<std::size_t>(crossing);
    LesReport r = les_consistency(d, k, in.cube_limit);
    std::cout << (l_format == "json" ? to_json(r) : render_text(r));
    return r.exact() ? 0 : kExitFailure;
  }
  if (*pages) {
    SpectralPages sp = spectral_pages(d, max_r, in.cube_limit);
    std::cout << (p_format == "json" ? to_json(sp) : render_text(sp));
    return 0;
  }
  if (*euler) {
    std::cout << to_string(graded_euler_characteristic(khovanov_homology(d, Ring::Q, in.cube_limit))) << '\n';
    return 0;
  }
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const khx::ResourceLimitError& e) {
    std::cerr << "khx: " << e.what() << '\n';
    return kExitResource;
  } catch (const khx::LeeConsistencyError& e) {
    std::cerr << "khx: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "khx: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "khx: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "khx: " << e.what() << '\n';
    return kExitFailure;
  }
}
