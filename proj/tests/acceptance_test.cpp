// End-to-end acceptance gate: eight checks, one pass/fail line each.
#include <chrono>
#include <cstdio>
#include <vector>

#include "gmlsat/gen.hpp"
#include "gmlsat/solver.hpp"

using namespace gmlsat;

namespace {

int failures = 0;

void report(int n, const char* what, bool ok) {
  std::printf("criterion %d (%s): %s\n", n, what, ok ? "pass" : "fail");
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Independent semantics for the legacy operators: dia^n needs strictly more
// than n successors with the body, box^n at most n successors refuting it.
bool eval(const KripkeStructure& m, int x, const Formula& f) {
  switch (f->kind) {
    case FKind::Atom:
      return m.holds_atom(f->atom, x);
    case FKind::Not:
      return !eval(m, x, f->lhs);
    case FKind::And:
      return eval(m, x, f->lhs) && eval(m, x, f->rhs);
    case FKind::Or:
      return eval(m, x, f->lhs) || eval(m, x, f->rhs);
    default:
      break;
  }
  std::uint64_t sat_count = 0, unsat_count = 0;
  for (int y = 0; y < m.worlds(); ++y) {
    bool edge = true;
    for (const Rel& r : f->rel_parts)
      if (!m.has_edge(r, x, y)) edge = false;
    if (!edge) continue;
    if (eval(m, y, f->lhs))
      ++sat_count;
    else
      ++unsat_count;
  }
  switch (f->kind) {
    case FKind::Geq:
      return sat_count >= f->bound;
    case FKind::Leq:
      return sat_count <= f->bound;
    case FKind::Dia:
      return sat_count > f->bound;
    default:  // Box
      return unsat_count <= f->bound;
  }
}

}  // namespace

int main() {
  // 1: the three-successor formula; the legacy calculus accepts it, the
  // sound engines reject its modernized form.
  {
    auto t0 = std::chrono::steady_clock::now();
    Formula legacy = to_nnf_legacy(parse_formula(
        "(and (dia R 2 p1) (and (box R 1 p2) (box R 1 (not p2))))"));
    Formula modern = to_nnf(modernize(parse_formula(
        "(and (dia R 2 p1) (and (box R 1 p2) (box R 1 (not p2))))")));
    bool ok = solve_incorrect(legacy).sat && !solve_standard(modern).sat &&
              !solve_grk(modern).sat && seconds_since(t0) < 1.0;
    report(1, "unsound acceptance vs sound rejection", ok);
  }

  // 2: the reset-restart formula; the inverse engine must refute it and
  // actually take at least one restart doing so.
  {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = solve_grkri(to_nnf(parse_formula(
        "(and (le r1 0 q) (and (ge r1 1 (or p q)) "
        "(ge r2 1 (le (inv r2) 0 (ge r1 1 p)))))")));
    report(2, "inverse refutation with restarts",
           !v.sat && v.stats.restarts >= 1 && seconds_since(t0) < 1.0);
  }

  // 3-5, 7: corpus runs. 1000 seeded formulas, three engines, verdict
  // agreement, witness checking, and the trace-depth / closure bounds.
  bool agree_std = true, agree_inv = true, witnesses = true, bounds = true;
  {
    GenProfile prof;  // size <= 25, n <= 4, 2 relations, no inverse
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
      Formula f = to_nnf(generate(seed, prof));
      FormulaMeasures ms = measures(f);
      if (clos(f).size() > 2 * ms.size) bounds = false;
      Verdict opt = solve_grk(f, {}, true);
      Verdict std_v = solve_standard(f, {}, true);
      Verdict inv = solve_grkri(f, {}, true);
      if (opt.sat != std_v.sat) agree_std = false;
      if (opt.sat != inv.sat) agree_inv = false;
      for (const Verdict* v : {&opt, &std_v, &inv})
        if (v->sat && (!v->model || !check(*v->model, v->root, f)))
          witnesses = false;
      for (const Verdict* v : {&opt, &inv})
        if (v->stats.max_depth > ms.modal_depth + 1) bounds = false;
    }
  }
  report(3, "counter engine agrees with the standard engine", agree_std);
  report(4, "inverse engine conservative over plain inputs", agree_inv);
  report(5, "every SAT verdict carries a checking witness", witnesses);

  // 6: a million-fold bound in constant live space; the standard engine
  // must hit its constraint cap instead.
  {
    auto t0 = std::chrono::steady_clock::now();
    Formula big = to_nnf(parse_formula("(ge R 1048576 p)"));
    Verdict v = solve_grk(big);
    bool ok = v.sat && v.stats.peak_live_vars <= 3 && v.stats.max_depth <= 2 &&
              seconds_since(t0) < 30.0;
    bool aborted = false;
    try {
      solve_standard(big);
    } catch (const resource_limit_error&) {
      aborted = true;
    }
    report(6, "binary-coded bounds in trace space", ok && aborted);
  }

  report(7, "trace depth and closure bounds", bounds);

  // 8: normal forms preserve truth in every structure with up to 3 worlds.
  {
    GenProfile prof;
    prof.max_size = 12;
    prof.max_n = 2;
    prof.atoms = 2;
    prof.relations = 1;
    prof.allow_legacy = true;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 200 && ok; ++seed) {
      Formula f = generate(seed, prof);
      Formula nf = to_nnf(modernize(f));
      std::vector<std::string> atoms = atom_names(f);
      std::vector<std::string> rels = relation_names(f);
      for (int n = 1; n <= 3 && ok; ++n) {
        int edge_bits = static_cast<int>(rels.size()) * n * n;
        int val_bits = static_cast<int>(atoms.size()) * n;
        for (std::uint64_t bitmap = 0;
             bitmap < (1ull << (edge_bits + val_bits)) && ok; ++bitmap) {
          KripkeStructure m(n);
          int bit = 0;
          for (const std::string& r : rels)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j, ++bit)
                if (bitmap >> bit & 1) m.add_edge(r, i, j);
          for (const std::string& a : atoms)
            for (int w = 0; w < n; ++w, ++bit)
              if (bitmap >> bit & 1) m.set_atom(a, w);
          for (int x = 0; x < n; ++x)
            if (eval(m, x, f) != check(m, x, nf)) ok = false;
        }
      }
    }
    report(8, "normal forms preserve truth", ok);
  }

  return failures == 0 ? 0 : 1;
}
