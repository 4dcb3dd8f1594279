#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gmlsat/csys.hpp"
#include "gmlsat/kripke.hpp"

using namespace gmlsat;

namespace {

// Root with three p1-successors and no p2 anywhere; the structure the buggy
// calculus accepts for the three-successor counterexample.
KripkeStructure three_succ() {
  KripkeStructure m(4);
  for (int y = 1; y <= 3; ++y) {
    m.add_edge("R", 0, y);
    m.set_atom("p1", y);
  }
  return m;
}

}  // namespace

TEST_CASE("successor counting") {
  KripkeStructure m(3);
  m.add_edge("R", 0, 1);
  m.add_edge("R", 0, 2);
  m.set_atom("p", 1);
  CHECK(succ_count(m, 0, RelationExpr{Rel{"R"}}, parse_formula("p")) == 1);
  CHECK(succ_count(m, 0, RelationExpr{{Rel{"R"}, Rel{"S"}}},
                   parse_formula("p")) == 0);

  KripkeStructure f2 = three_succ();
  CHECK(succ_count(f2, 0, RelationExpr{Rel{"R"}}, parse_formula("p1")) == 3);
  CHECK(succ_count(f2, 0, RelationExpr{Rel{"R"}}, parse_formula("p2")) == 0);
}

TEST_CASE("inverse edges are never materialized") {
  KripkeStructure m(2);
  m.add_edge("R", 0, 1);
  CHECK(m.has_edge(Rel{"R", false}, 0, 1));
  CHECK(m.has_edge(Rel{"R", true}, 1, 0));
  CHECK(!m.has_edge(Rel{"R", true}, 0, 1));
  CHECK(succ_count(m, 1, RelationExpr{Rel{"R", true}}, parse_formula("(or p (not p))")) == 1);
}

TEST_CASE("model checking") {
  KripkeStructure one(1);
  one.set_atom("p", 0);
  CHECK(check(one, 0, parse_formula("p")));
  CHECK(check(one, 0, parse_formula("(ge R 0 p)")));
  CHECK(!check(one, 0, parse_formula("(and p (not p))")));

  KripkeStructure f2 = three_succ();
  CHECK(!check(f2, 0, parse_formula("(le R 1 (not p2))")));
  CHECK(check(f2, 0, parse_formula("(ge R 3 p1)")));
  CHECK_THROWS(check(one, 0, parse_formula("(dia R 1 p)")));
}

TEST_CASE("structure read off a constraint system") {
  ConstraintSystem s;
  int x = s.add_var();
  s.add_formula(x, parse_formula("p"));
  auto [m1, w1] = canonical_structure(s);
  CHECK(m1.worlds() == 1);
  CHECK(m1.holds_atom("p", w1.at(x)));

  ConstraintSystem s2;
  int r = s2.add_var();
  s2.add_formula(r, parse_formula("(dia R 2 p1)"));
  for (int i = 0; i < 3; ++i) {
    int y = s2.add_var(r);
    s2.add_edge(Rel{"R"}, r, y);
    s2.add_formula(y, parse_formula("p1"));
  }
  auto [m2, w2] = canonical_structure(s2);
  CHECK(m2.worlds() == 4);
  CHECK(succ_count(m2, w2.at(r), RelationExpr{Rel{"R"}}, parse_formula("p1")) == 3);
}

TEST_CASE("bounded model enumeration") {
  EnumResult one = enumerate_models(parse_formula("p"), 3);
  CHECK(one.status == EnumStatus::Found);
  CHECK(one.model.worlds() == 1);

  CHECK(enumerate_models(parse_formula("(and p (not p))"), 3).status ==
        EnumStatus::NoneFound);

  // Self-loops count as successors, so two worlds suffice.
  EnumResult ge2 = enumerate_models(parse_formula("(ge R 2 p)"), 4);
  CHECK(ge2.status == EnumStatus::Found);
  CHECK(ge2.model.worlds() == 2);
  CHECK(check(ge2.model, ge2.world, parse_formula("(ge R 2 p)")));
}

TEST_CASE("model text format round trip") {
  KripkeStructure m = three_succ();
  std::string text = model_to_text(m, 0);
  auto [back, root] = model_from_text(text);
  CHECK(root == 0);
  CHECK(back.worlds() == 4);
  CHECK(model_to_text(back, root) == text);
  CHECK(text.find("world w0") == 0);
}
