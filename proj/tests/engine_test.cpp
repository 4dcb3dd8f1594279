#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gmlsat/gen.hpp"
#include "gmlsat/solver.hpp"

using namespace gmlsat;

namespace {

// The three-successor formula the unsound calculus wrongly accepts:
// more than two R-successors with p1, at most one without p2, at most one
// without (not p2).
Formula counterexample_legacy() {
  return to_nnf_legacy(parse_formula(
      "(and (dia R 2 p1) (and (box R 1 p2) (box R 1 (not p2))))"));
}

Formula counterexample_modern() {
  return to_nnf(parse_formula(
      "(and (ge R 3 p1) (and (le R 1 p2) (le R 1 (not p2))))"));
}

// Forces a restart: the R2-child's constraint about its predecessor can
// only be decided back at the root.
Formula reset_restart() {
  return to_nnf(parse_formula(
      "(and (le r1 0 q) (and (ge r1 1 (or p q)) "
      "(ge r2 1 (le (inv r2) 0 (ge r1 1 p)))))"));
}

}  // namespace

TEST_CASE("unsound legacy engine accepts the counterexample") {
  Verdict v = solve_incorrect(counterexample_legacy());
  CHECK(v.sat);
  REQUIRE(v.model);
  // the accepted system: root plus three p1-successors
  CHECK(v.model->worlds() == 4);
  CHECK(succ_count(*v.model, v.root, RelationExpr{Rel{"R"}},
                   parse_formula("p1")) == 3);
}

TEST_CASE("legacy engine basics") {
  CHECK(!solve_incorrect(to_nnf_legacy(parse_formula("(and p (not p))"))).sat);
  CHECK(solve_incorrect(to_nnf_legacy(parse_formula("(dia R 1 p)"))).sat);
  CHECK(!solve_incorrect(
             to_nnf_legacy(parse_formula("(and (dia R 0 p) (box R 0 (not p)))")))
             .sat);
  CHECK_THROWS_AS(solve_incorrect(parse_formula("(ge R 1 p)")),
                  std::invalid_argument);
}

TEST_CASE("standard engine") {
  CHECK(!solve_standard(counterexample_modern()).sat);
  Verdict v = solve_standard(to_nnf(parse_formula("(ge R 2 p)")));
  CHECK(v.sat);
  REQUIRE(v.model);
  CHECK(succ_count(*v.model, v.root, RelationExpr{Rel{"R"}},
                   parse_formula("p")) == 2);
  CHECK(solve_standard(to_nnf(parse_formula("(or p (not p))"))).sat);
}

TEST_CASE("standard engine merges on a violated upper bound") {
  // >=1 p and >=1 q generate two successors; <=1 (p or q) forces a merge.
  Formula f = to_nnf(parse_formula(
      "(and (ge R 1 p) (and (ge R 1 q) (le R 1 (or p q))))"));
  Verdict v = solve_standard(f);
  CHECK(v.sat);
  REQUIRE(v.model);
  CHECK(check(*v.model, v.root, f));
}

TEST_CASE("counter engine") {
  CHECK(!solve_grk(counterexample_modern()).sat);
  CHECK(solve_grk(to_nnf(parse_formula("(ge R 0 p)"))).sat);
  CHECK(solve_grk(to_nnf(parse_formula("(and p (or (not p) q))"))).sat);
  CHECK(!solve_grk(to_nnf(parse_formula("(and p (not p))"))).sat);
  // forced signs: every successor additionally gets (not q)
  Formula f = to_nnf(parse_formula("(and (ge R 2 p) (le R 0 q))"));
  Verdict v = solve_grk(f, {}, true);
  CHECK(v.sat);
  REQUIRE(v.model);
  CHECK(check(*v.model, v.root, f));
}

TEST_CASE("counter engine runs in trace space on a huge bound") {
  Verdict v = solve_grk(to_nnf(parse_formula("(ge R 1048576 p)")));
  CHECK(v.sat);
  CHECK(v.stats.max_depth <= 2);
  CHECK(v.stats.peak_live_vars <= 2);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_grk(parse_formula("(dia R 1 p)")),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_grk(parse_formula("(not (and p q))")),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_grk(to_nnf(parse_formula("(ge (inv R) 1 p)"))),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_standard(to_nnf(parse_formula("(ge (cap R S) 1 p)"))),
                  std::invalid_argument);
}

TEST_CASE("resource limits") {
  Limits tight;
  tight.max_constraints = 100;
  CHECK_THROWS_AS(solve_standard(to_nnf(parse_formula("(ge R 1000 p)")), tight),
                  resource_limit_error);
  Limits steps;
  steps.max_steps = 5;
  CHECK_THROWS_AS(solve_grk(counterexample_modern(), steps),
                  resource_limit_error);
}

TEST_CASE("inverse engine on plain inputs") {
  CHECK(!solve_grkri(counterexample_modern()).sat);
  CHECK(solve_grkri(to_nnf(parse_formula("(ge R 2 p)"))).sat);
  CHECK(!solve_grkri(to_nnf(parse_formula("(and p (not p)"
                                          ")"))).sat);
}

TEST_CASE("inverse engine on inverse and intersection inputs") {
  // every (cap R S)-successor is an R-successor
  CHECK(!solve_grkri(to_nnf(parse_formula(
                         "(and (ge (cap R S) 2 p) (le R 1 p))")))
             .sat);
  CHECK(solve_grkri(to_nnf(parse_formula("(ge (cap R S) 2 p)"))).sat);
  CHECK(solve_grkri(to_nnf(parse_formula("(ge (inv R) 1 p)"))).sat);
  // a successor's constraint on its predecessor propagates back
  CHECK(!solve_grkri(to_nnf(parse_formula(
                         "(and p (ge R 1 (le (inv R) 0 p)))")))
             .sat);
}

TEST_CASE("inverse engine restarts on the reset formula") {
  Verdict v = solve_grkri(reset_restart());
  CHECK(!v.sat);
  CHECK(v.stats.restarts >= 1);
}

TEST_CASE("witness models check out") {
  GenProfile prof;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Formula f = to_nnf(generate(seed, prof));
    Verdict v = solve_grk(f, {}, true);
    if (v.sat) {
      REQUIRE(v.model);
      CHECK(check(*v.model, v.root, f));
    }
  }
}
