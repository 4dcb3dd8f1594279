#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gmlsat/formula.hpp"
#include "gmlsat/gen.hpp"
#include <functional>

using namespace gmlsat;

TEST_CASE("parsing") {
  Formula f = parse_formula("(and p1 (not p1))");
  CHECK(f->kind == FKind::And);
  CHECK(f->lhs->kind == FKind::Atom);
  CHECK(f->lhs->atom == "p1");
  CHECK(f->rhs->kind == FKind::Not);

  Formula g = parse_formula("(ge (cap R (inv S)) 2 p)");
  CHECK(g->kind == FKind::Geq);
  CHECK(g->bound == 2);
  REQUIRE(g->rel_parts.size() == 2);
  CHECK(g->rel_parts[0] == Rel{"R", false});
  CHECK(g->rel_parts[1] == Rel{"S", true});

  Formula d = parse_formula("(dia R 2 p1)");
  CHECK(d->kind == FKind::Dia);
  CHECK(d->bound == 2);
  CHECK(d->rel_parts.front() == Rel{"R", false});

  CHECK_THROWS_AS(parse_formula("(and p"), parse_error);
  CHECK_THROWS_AS(parse_formula("(ge R x p)"), parse_error);
  CHECK_THROWS_AS(parse_formula("(dia (inv R) 1 p)"), parse_error);
  CHECK_THROWS_AS(parse_formula("p0__false"), parse_error);
  CHECK_NOTHROW(parse_formula("p0__false", true));
}

TEST_CASE("print/parse round trip") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenProfile p;
    p.allow_inverse = true;
    p.allow_intersection = true;
    p.allow_legacy = true;
    Formula f = generate(seed, p);
    CHECK(equal(f, parse_formula(print_formula(f))));
  }
}

TEST_CASE("modernize") {
  CHECK(print_formula(modernize(parse_formula("(dia R 2 p1)"))) ==
        "(ge R 3 p1)");
  CHECK(print_formula(modernize(parse_formula("(box R 1 p2)"))) ==
        "(le R 1 (not p2))");
  CHECK(print_formula(modernize(parse_formula("p"))) == "p");
}

TEST_CASE("negation normal form") {
  CHECK(print_formula(to_nnf(parse_formula("(not (and p q))"))) ==
        "(or (not p) (not q))");
  CHECK(print_formula(to_nnf(parse_formula("(not (le R 2 p))"))) ==
        "(ge R 3 p)");
  CHECK(print_formula(to_nnf(parse_formula("(not (ge R 0 p))"))) ==
        "(and p0__false (not p0__false))");
  // idempotent
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Formula f = to_nnf(generate(seed));
    CHECK(is_nnf(f));
    CHECK(equal(f, to_nnf(f)));
  }
}

TEST_CASE("nnf negation operator") {
  Formula p = parse_formula("p");
  CHECK(print_formula(neg_nnf(p)) == "(not p)");
  CHECK(print_formula(neg_nnf(parse_formula("(ge R 3 p)"))) == "(le R 2 p)");
  // involution and norm preservation; a >=0 modality is the exception, its
  // negation collapses to the false constant
  std::function<bool(const Formula&)> has_geq0 = [&](const Formula& f) {
    if (f->kind == FKind::Geq && f->bound == 0) return true;
    return (f->lhs && has_geq0(f->lhs)) || (f->rhs && has_geq0(f->rhs));
  };
  int tested = 0;
  for (std::uint64_t seed = 1; tested < 100; ++seed) {
    Formula f = to_nnf(generate(seed));
    if (has_geq0(f)) continue;
    ++tested;
    CHECK(equal(f, neg_nnf(neg_nnf(f))));
    CHECK(measures(f).norm == measures(neg_nnf(f)).norm);
  }
}

TEST_CASE("closure") {
  FormulaSet c = clos(parse_formula("p"));
  CHECK(c.size() == 2);
  CHECK(c.count(parse_formula("p")) == 1);
  CHECK(c.count(parse_formula("(not p)")) == 1);

  FormulaSet c2 = clos(parse_formula("(ge R 1 p)"));
  CHECK(c2.size() == 4);
  CHECK(c2.count(parse_formula("(ge R 1 p)")) == 1);
  CHECK(c2.count(parse_formula("(le R 0 p)")) == 1);
  CHECK(c2.count(parse_formula("p")) == 1);
  CHECK(c2.count(parse_formula("(not p)")) == 1);

  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Formula f = to_nnf(generate(seed));
    CHECK(clos(f).size() <= 2 * measures(f).size);
  }
}

TEST_CASE("measures") {
  CHECK(measures(parse_formula("p")).norm == 0);
  CHECK(measures(parse_formula("(not p)")).norm == 0);
  CHECK(measures(parse_formula("(and p (not q))")).norm == 1);
  CHECK(measures(parse_formula("(ge R 1 (le S 0 p))")).modal_depth == 2);
}

TEST_CASE("generator") {
  GenProfile p;
  Formula first = generate(1, p);
  CHECK(equal(first, generate(1, p)));  // deterministic per seed
  std::set<std::string> seen;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    Formula f = generate(seed, p);
    CHECK(!mentions_inverse_or_intersection(f));
    CHECK(is_legacy_free(f));
    CHECK(measures(f).size >= 1);
    seen.insert(print_formula(f));
  }
  CHECK(seen.size() == 1000);
}
