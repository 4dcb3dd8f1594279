#include <algorithm>
#include <stdexcept>

#include "gmlsat/solver.hpp"

namespace gmlsat {

namespace {

// Backtracking search over the legacy calculus. Branches copy the whole
// system; fine at the scale this engine is meant for.
class IncorrectSearch {
 public:
  IncorrectSearch(const Limits& limits, SolveStats& stats)
      : limits_(limits), stats_(stats) {}

  std::optional<ConstraintSystem> run(ConstraintSystem s) { return search(std::move(s)); }

 private:
  const Limits& limits_;
  SolveStats& stats_;

  void step() {
    if (++stats_.steps > limits_.max_steps)
      throw resource_limit_error("step limit exceeded");
  }

  void note_live(const ConstraintSystem& s, int y) {
    std::uint64_t live = s.vars().size();
    stats_.peak_live_vars = std::max(stats_.peak_live_vars, live);
    std::uint64_t depth = 1;
    for (std::optional<int> p = s.parent(y); p; p = s.parent(*p)) ++depth;
    stats_.max_depth = std::max(stats_.max_depth, depth);
  }

  std::optional<ConstraintSystem> search(ConstraintSystem s) {
    while (true) {
      if (s.detect_clash(ClashMode::Legacy)) return std::nullopt;
      if (s.constraint_count() > limits_.max_constraints)
        throw resource_limit_error("constraint limit exceeded");

      bool applied = false;

      // And-rule.
      for (int x : s.vars()) {
        for (const Formula& f : s.label(x)) {
          if (f->kind != FKind::And) continue;
          if (s.has(x, f->lhs) && s.has(x, f->rhs)) continue;
          step();
          Formula l = f->lhs, r = f->rhs;  // adding may reallocate the label
          s.add_formula(x, l);
          s.add_formula(x, r);
          applied = true;
          break;
        }
        if (applied) break;
      }
      if (applied) continue;

      // Or-rule: don't-know choice over the disjuncts.
      for (int x : s.vars()) {
        for (const Formula& f : s.label(x)) {
          if (f->kind != FKind::Or) continue;
          if (s.has(x, f->lhs) || s.has(x, f->rhs)) continue;
          step();
          for (const Formula& chi : {f->lhs, f->rhs}) {
            ConstraintSystem branch = s;
            branch.add_formula(x, chi);
            if (auto done = search(std::move(branch))) return done;
            ++stats_.backtracks;
          }
          return std::nullopt;
        }
      }

      // Box-0 rule: propagate the body to every successor lacking it.
      for (int x : s.vars()) {
        for (const Formula& f : s.label(x)) {
          if (f->kind != FKind::Box || f->bound != 0) continue;
          for (const auto& [rel, y] : s.out_edges(x)) {
            if (rel != f->rel_parts.front() || s.has(y, f->lhs)) continue;
            step();
            s.add_formula(y, f->lhs);
            applied = true;
            break;
          }
          if (applied) break;
        }
        if (applied) break;
      }
      if (applied) continue;

      // Diamond rule: generate while the count has not passed the bound.
      for (int x : s.vars()) {
        for (const Formula& f : s.label(x)) {
          if (f->kind != FKind::Dia) continue;
          if (s.count(x, f->rel(), f->lhs) > f->bound) continue;
          step();
          int y = s.add_var(x);
          ++stats_.nodes_created;
          s.add_edge(f->rel_parts.front(), x, y);
          s.add_formula(y, f->lhs);
          note_live(s, y);
          applied = true;
          break;
        }
        if (applied) break;
      }
      if (applied) continue;

      // Box-n rule: don't-know choice over safe merge pairs.
      for (int x : s.vars()) {
        for (const Formula& f : s.label(x)) {
          if (f->kind != FKind::Box || f->bound == 0) continue;
          if (s.count(x, f->rel(), f->lhs) <= f->bound) continue;
          std::vector<int> ys;
          for (const auto& [rel, y] : s.out_edges(x))
            if (rel == f->rel_parts.front() &&
                std::find(ys.begin(), ys.end(), y) == ys.end())
              ys.push_back(y);
          std::sort(ys.begin(), ys.end());
          bool any = false;
          for (int y : ys) {
            for (int z : ys) {
              if (y == z || !s.is_safe_replacement(y, z, ClashMode::Legacy))
                continue;
              any = true;
              step();
              ConstraintSystem branch = s;
              branch.replace_var(y, z);
              if (auto done = search(std::move(branch))) return done;
              ++stats_.backtracks;
            }
          }
          if (any) return std::nullopt;
        }
      }

      // Complete and clash-free.
      return s;
    }
  }
};

}  // namespace

Verdict solve_incorrect(const Formula& phi, const Limits& limits) {
  if (!is_nnf(phi))
    throw std::invalid_argument("legacy engine requires an NNF input");
  bool ok_syntax = true;
  // ge/le modalities are not part of the legacy calculus.
  {
    std::vector<Formula> work{phi};
    while (!work.empty()) {
      Formula f = work.back();
      work.pop_back();
      if (f->kind == FKind::Geq || f->kind == FKind::Leq) ok_syntax = false;
      if (f->lhs) work.push_back(f->lhs);
      if (f->rhs) work.push_back(f->rhs);
    }
  }
  if (!ok_syntax)
    throw std::invalid_argument(
        "legacy engine accepts only dia/box modalities");

  Verdict v;
  ConstraintSystem s;
  int root = s.add_var();
  s.add_formula(root, phi);
  v.stats.nodes_created = 1;
  v.stats.peak_live_vars = 1;
  v.stats.max_depth = 1;
  IncorrectSearch search(limits, v.stats);
  auto done = search.run(std::move(s));
  v.sat = done.has_value();
  if (done) {
    v.final_system = done->dump();
    auto [model, world_of] = canonical_structure(*done);
    v.model = std::move(model);
    v.root = world_of.at(root);
  }
  return v;
}

}  // namespace gmlsat
