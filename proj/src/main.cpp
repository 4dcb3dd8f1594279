#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gmlsat/gen.hpp"
#include "gmlsat/solver.hpp"

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitUsage = 1;
constexpr int kExitResource = 2;
constexpr int kExitOracleMismatch = 3;

bool has_graded_modality(const gmlsat::Formula& f) {
  std::vector<gmlsat::Formula> work{f};
  while (!work.empty()) {
    gmlsat::Formula g = work.back();
    work.pop_back();
    if (g->kind == gmlsat::FKind::Geq || g->kind == gmlsat::FKind::Leq)
      return true;
    if (g->lhs) work.push_back(g->lhs);
    if (g->rhs) work.push_back(g->rhs);
  }
  return false;
}

std::uint64_t max_bound(const gmlsat::Formula& f) {
  std::uint64_t m = 0;
  std::vector<gmlsat::Formula> work{f};
  while (!work.empty()) {
    gmlsat::Formula g = work.back();
    work.pop_back();
    if (g->kind != gmlsat::FKind::Atom && g->kind != gmlsat::FKind::Not &&
        g->kind != gmlsat::FKind::And && g->kind != gmlsat::FKind::Or)
      m = std::max(m, g->bound);
    if (g->lhs) work.push_back(g->lhs);
    if (g->rhs) work.push_back(g->rhs);
  }
  return m;
}

int run_solve(const std::string& path, std::string engine, bool want_model,
              bool want_stats, bool oracle, const gmlsat::Limits& limits) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return kExitUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  gmlsat::Formula raw;
  try {
    raw = gmlsat::parse_formula(buf.str());
  } catch (const gmlsat::parse_error& e) {
    std::cerr << "parse error at " << e.line << ":" << e.col << ": "
              << e.what() << "\n";
    return kExitUsage;
  }

  bool inv = gmlsat::mentions_inverse_or_intersection(raw);
  if (engine == "auto") engine = inv ? "inverse" : "optimized";
  if (inv && engine != "inverse") {
    std::cerr << "error: engine '" << engine
              << "' does not support inverse or intersected relations\n";
    return kExitUsage;
  }

  try {
    gmlsat::Verdict v;
    if (engine == "incorrect") {
      if (has_graded_modality(raw)) {
        std::cerr << "error: the incorrect engine accepts only the legacy "
                     "dia/box syntax\n";
        return kExitUsage;
      }
      v = gmlsat::solve_incorrect(gmlsat::to_nnf_legacy(raw), limits);
    } else {
      gmlsat::Formula phi = gmlsat::to_nnf(gmlsat::modernize(raw));
      if (engine == "standard")
        v = gmlsat::solve_standard(phi, limits, want_model);
      else if (engine == "optimized")
        v = gmlsat::solve_grk(phi, limits, want_model);
      else if (engine == "inverse")
        v = gmlsat::solve_grkri(phi, limits, want_model);
      else {
        std::cerr << "error: unknown engine '" << engine << "'\n";
        return kExitUsage;
      }
      if (oracle) {
        if (inv || max_bound(phi) > 8) {
          std::cerr << "warning: oracle cross-check skipped (out of the "
                       "oracle's scope)\n";
        } else if (engine != "standard") {
          gmlsat::Verdict ref = gmlsat::solve_standard(phi, limits, false);
          if (ref.sat != v.sat) {
            std::cerr << "oracle mismatch: " << engine << " says "
                      << (v.sat ? "SAT" : "UNSAT") << ", standard says "
                      << (ref.sat ? "SAT" : "UNSAT") << "\n";
            return kExitOracleMismatch;
          }
        }
      }
    }

    std::cout << (v.sat ? "SAT" : "UNSAT") << "\n";
    if (want_model && v.sat && v.model)
      std::cout << gmlsat::model_to_text(*v.model, v.root);
    if (want_stats) {
      std::cout << "verdict=" << (v.sat ? "SAT" : "UNSAT") << "\n"
                << "max_depth=" << v.stats.max_depth << "\n"
                << "peak_live_vars=" << v.stats.peak_live_vars << "\n"
                << "nodes_created=" << v.stats.nodes_created << "\n"
                << "backtracks=" << v.stats.backtracks << "\n";
      if (engine == "inverse")
        std::cout << "restarts=" << v.stats.restarts << "\n";
    }
    return v.sat ? kExitSat : kExitUnsat;
  } catch (const gmlsat::resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satisfiability solver for graded modal logics"};
  app.require_subcommand(1);

  std::string input;
  std::string engine = "auto";
  bool want_model = false;
  bool want_stats = false;
  bool oracle = false;
  gmlsat::Limits limits;

  CLI::App* solve = app.add_subcommand("solve", "decide one formula");
  solve->add_option("file", input, "formula file (s-expression grammar)")
      ->required();
  solve->add_option("--engine", engine,
                    "optimized|standard|incorrect|inverse (default: by input)")
      ->check(CLI::IsMember({"auto", "optimized", "standard", "incorrect",
                             "inverse"}));
  solve->add_flag("--model", want_model, "print a witness model on SAT");
  solve->add_flag("--stats", want_stats, "print search statistics");
  solve->add_flag("--oracle", oracle,
                  "cross-check the verdict against the standard engine");
  solve->add_option("--max-steps", limits.max_steps, "rule application limit");
  solve->add_option("--max-depth", limits.max_depth, "trace depth limit");
  solve->add_option("--max-constraints", limits.max_constraints,
                    "constraint count limit");

  std::uint64_t seed = 1;
  std::uint64_t count = 1;
  gmlsat::GenProfile profile;
  CLI::App* gen = app.add_subcommand("gen", "emit seeded random formulas");
  gen->add_option("--seed", seed, "first seed");
  gen->add_option("--count", count, "number of formulas (seeds seed..seed+n-1)");
  gen->add_option("--max-size", profile.max_size, "node budget");
  gen->add_option("--max-n", profile.max_n, "largest modality bound");
  gen->add_option("--atoms", profile.atoms, "atom vocabulary size");
  gen->add_option("--relations", profile.relations, "relation vocabulary size");
  gen->add_flag("--allow-inverse", profile.allow_inverse, "emit inv");
  gen->add_flag("--allow-intersection", profile.allow_intersection, "emit cap");
  gen->add_flag("--allow-legacy", profile.allow_legacy, "emit dia/box");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (solve->parsed())
    return run_solve(input, engine, want_model, want_stats, oracle, limits);

  for (std::uint64_t i = 0; i < count; ++i)
    std::cout << gmlsat::print_formula(gmlsat::generate(seed + i, profile))
              << "\n";
  return 0;
}
