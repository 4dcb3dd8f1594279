#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gmlsat/csys.hpp"

using namespace gmlsat;

TEST_CASE("counting") {
  ConstraintSystem s;
  int x = s.add_var();
  int y = s.add_var(x);
  s.add_edge(Rel{"R"}, x, y);
  s.add_formula(y, parse_formula("p"));
  CHECK(s.count(x, RelationExpr{Rel{"R"}}, parse_formula("p")) == 1);

  s.add_edge(Rel{"S"}, x, y);
  CHECK(s.count(x, RelationExpr{{Rel{"R"}, Rel{"S"}}}, parse_formula("p")) == 1);
  CHECK(s.count(x, RelationExpr{{Rel{"R"}, Rel{"T"}}}, parse_formula("p")) == 0);
}

TEST_CASE("counting matches the three-successor system") {
  ConstraintSystem s;
  int x = s.add_var();
  s.add_formula(x, parse_formula("(dia R 2 p1)"));
  for (int i = 0; i < 3; ++i) {
    int y = s.add_var(x);
    s.add_edge(Rel{"R"}, x, y);
    s.add_formula(y, parse_formula("p1"));
  }
  CHECK(s.count(x, RelationExpr{Rel{"R"}}, parse_formula("p1")) == 3);
}

TEST_CASE("indexed counts agree with scans") {
  ConstraintSystem s(false, true);
  int x = s.add_var();
  for (int i = 0; i < 3; ++i) {
    int y = s.add_var(x);
    s.add_edge(Rel{"R"}, x, y);
    if (i < 2) s.add_formula(y, parse_formula("p"));
  }
  CHECK(s.fast_count(x, Rel{"R"}, parse_formula("p")) == 2);
  CHECK(s.fast_count(x, Rel{"R"}, parse_formula("p")) ==
        s.count(x, RelationExpr{Rel{"R"}}, parse_formula("p")));
}

TEST_CASE("clash detection") {
  ConstraintSystem s;
  int x = s.add_var();
  s.add_formula(x, parse_formula("p"));
  CHECK(!s.detect_clash(ClashMode::Graded));
  s.add_formula(x, parse_formula("(not p)"));
  CHECK(s.detect_clash(ClashMode::Graded));

  ConstraintSystem c;
  int a = c.add_var();
  c.add_formula(a, parse_formula("(le R 1 p)"));
  for (int i = 0; i < 2; ++i) {
    int y = c.add_var(a);
    c.add_edge(Rel{"R"}, a, y);
    c.add_formula(y, parse_formula("p"));
  }
  CHECK(c.detect_clash(ClashMode::Graded));
  CHECK(!c.detect_clash(ClashMode::Legacy));  // the bug: no counting clash

  ConstraintSystem l;
  int b = l.add_var();
  l.add_formula(b, parse_formula("(dia R 1 p)"));
  l.add_formula(b, parse_formula("(box R 1 (not p))"));
  CHECK(l.detect_clash(ClashMode::Legacy));
}

TEST_CASE("merge and safety") {
  ConstraintSystem s;
  int x = s.add_var();
  s.add_formula(x, parse_formula("(ge R 1 p)"));
  int y = s.add_var(x);
  int z = s.add_var(x);
  s.add_edge(Rel{"R"}, x, y);
  s.add_edge(Rel{"R"}, x, z);
  s.add_formula(y, parse_formula("p"));
  s.add_formula(z, parse_formula("p"));
  CHECK(s.is_safe_replacement(y, z, ClashMode::Graded));

  // Two distinct witnesses with a >= 2 requirement: the merge drops the
  // count below the bound.
  ConstraintSystem u;
  int a = u.add_var();
  u.add_formula(a, parse_formula("(ge R 2 p)"));
  int b = u.add_var(a);
  int c = u.add_var(a);
  u.add_edge(Rel{"R"}, a, b);
  u.add_edge(Rel{"R"}, a, c);
  u.add_formula(b, parse_formula("p"));
  u.add_formula(c, parse_formula("p"));
  CHECK(!u.is_safe_replacement(b, c, ClashMode::Graded));

  // [z/y] rewrites every occurrence of y to z; y dies.
  ConstraintSystem r;
  int p = r.add_var();
  int q = r.add_var(p);
  int t = r.add_var(p);
  r.add_edge(Rel{"R"}, p, q);
  r.add_formula(q, parse_formula("p"));
  r.replace_var(q, t);
  CHECK(!r.alive(q));
  CHECK(r.has_edge(Rel{"R"}, p, t));
  CHECK(r.has(t, parse_formula("p")));
}

TEST_CASE("subtree deletion") {
  ConstraintSystem s;
  int x = s.add_var();
  int y = s.add_var(x);
  int z = s.add_var(y);
  s.add_edge(Rel{"R"}, x, y);
  s.add_edge(Rel{"R"}, y, z);
  s.add_formula(y, parse_formula("p"));
  s.add_formula(z, parse_formula("q"));

  ConstraintSystem leaf = s;
  leaf.delete_subtrees(z);
  CHECK(leaf.dump() == s.dump());

  s.delete_subtrees(y);
  CHECK(s.alive(y));
  CHECK(!s.alive(z));
  CHECK(s.has(y, parse_formula("p")));
  CHECK(!s.has_edge(Rel{"R"}, y, z));
}

TEST_CASE("inverse mode mirrors edges") {
  ConstraintSystem s(true);
  int x = s.add_var();
  int y = s.add_var(x);
  s.add_edge(Rel{"R"}, x, y);
  CHECK(s.has_edge(Rel{"R", true}, y, x));
  CHECK(s.edge_rels(y, x).count(Rel{"R", true}) == 1);
}

TEST_CASE("mark and rollback") {
  ConstraintSystem s;
  int x = s.add_var();
  s.add_formula(x, parse_formula("p"));
  std::string before = s.dump();
  ConstraintSystem::Mark m = s.mark();
  int y = s.add_var(x);
  s.add_edge(Rel{"R"}, x, y);
  s.add_formula(y, parse_formula("q"));
  s.add_formula(x, parse_formula("(ge R 1 q)"));
  s.rollback(m);
  CHECK(s.dump() == before);
  CHECK(s.var_slots() == 1);
}

TEST_CASE("counter bank") {
  CounterBank bank;
  RelationExpr r{Rel{"R"}};
  Formula p = parse_formula("p");
  CHECK(bank.get(0, r, p) == 0);
  bank.increment(0, r, p);
  bank.increment(0, r, p);
  CHECK(bank.get(0, r, p) == 2);
  CounterBank::Slice snap = bank.snapshot(0);
  bank.decrement(0, r, p);
  bank.clear_var(0);
  CHECK(bank.get(0, r, p) == 0);
  bank.restore(0, snap);
  CHECK(bank.get(0, r, p) == 2);
}

TEST_CASE("counter bank validates against a scan") {
  ConstraintSystem s;
  int x = s.add_var();
  s.add_formula(x, parse_formula("(ge R 2 p)"));
  CounterBank bank;
  for (int i = 0; i < 2; ++i) {
    int y = s.add_var(x);
    s.add_edge(Rel{"R"}, x, y);
    s.add_formula(y, parse_formula("p"));
    bank.increment(x, RelationExpr{Rel{"R"}}, parse_formula("p"));
  }
  CHECK(bank.validate(s, x));
  bank.increment(x, RelationExpr{Rel{"R"}}, parse_formula("q"));
  CHECK(!bank.validate(s, x));
}

TEST_CASE("dump format") {
  ConstraintSystem s;
  int x = s.add_var();
  int y = s.add_var(x);
  s.add_formula(x, parse_formula("p"));
  s.add_edge(Rel{"R"}, x, y);
  CHECK(s.dump() == "c 0 p\ne R 0 1\n");
}
