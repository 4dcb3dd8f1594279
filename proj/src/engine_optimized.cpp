#include <algorithm>
#include <stdexcept>
#include <string>

#include "gmlsat/solver.hpp"

namespace gmlsat {

namespace {

// Depth-first trace search. At any instant the constraint system holds only
// the current root-to-leaf path; information about completed sibling
// subtrees survives solely in the per-node successor counters. Don't-know
// choices (disjuncts, successor sign vectors) are explored by chronological
// backtracking.
class GrkSolver {
 public:
  GrkSolver(const Limits& limits, SolveStats& stats, bool record)
      : limits_(limits), stats_(stats), record_(record) {}

  bool solve(const Formula& phi) {
    int root = s_.add_var();
    s_.add_formula(root, phi);
    stats_.nodes_created = 1;
    stats_.peak_live_vars = 1;
    return sat(root, 1, next_uid_++, -1, {});
  }

  // Model read off the recording log: one world per surviving node.
  std::pair<KripkeStructure, int> assemble_model() const {
    KripkeStructure m;
    std::map<std::int64_t, int> world_of;
    for (const auto& e : rec_) world_of[e.uid] = m.add_world();
    for (const auto& e : rec_) {
      int w = world_of.at(e.uid);
      for (const auto& a : e.atoms) m.set_atom(a, w);
      if (e.parent_uid >= 0) {
        int pw = world_of.at(e.parent_uid);
        for (const Rel& r : e.rels)
          if (r.inverse)
            m.add_edge(r.name, w, pw);
          else
            m.add_edge(r.name, pw, w);
      }
    }
    return {std::move(m), world_of.at(rec_.back().uid)};
  }

 private:
  struct Disj {
    std::size_t cursor;  // resume position in the label
    ConstraintSystem::Mark mark;
    std::size_t rec_mark;
    Formula f;
    int which = 0;
  };

  // A generated successor; while it sits on the stack its counter
  // increments are live, and the system itself no longer holds its subtree.
  struct Succ {
    Formula trigger;
    std::string signs;  // '0' = body, '1' = negated body, per psi index
    std::size_t rec_mark;
  };

  struct RecEntry {
    std::int64_t uid;
    std::int64_t parent_uid;
    std::vector<Rel> rels;
    std::vector<std::string> atoms;
  };

  const Limits& limits_;
  SolveStats& stats_;
  bool record_;
  ConstraintSystem s_;
  CounterBank bank_;
  std::vector<RecEntry> rec_;
  std::int64_t next_uid_ = 0;

  void step() {
    if (++stats_.steps > limits_.max_steps)
      throw resource_limit_error("step limit exceeded");
  }

  bool atomic_clash(int x) const {
    for (const Formula& f : s_.label(x))
      if (f->kind == FKind::Atom && s_.has(x, mk_not(f))) return true;
    return false;
  }

  std::optional<Formula> find_trigger(int x) const {
    for (const Formula& f : s_.label(x))
      if (f->kind == FKind::Geq &&
          bank_.get(x, f->rel(), f->lhs) < f->bound)
        return f;
    return std::nullopt;
  }

  // {psi | x |= <R>_{~m} psi}, in formula order.
  std::vector<Formula> collect_psis(int x, const Formula& trigger) const {
    FormulaSet set;
    for (const Formula& f : s_.label(x))
      if ((f->kind == FKind::Geq || f->kind == FKind::Leq) &&
          f->rel_parts == trigger->rel_parts)
        set.insert(f->lhs);
    return {set.begin(), set.end()};
  }

  FormulaSet counted_set(const Formula& trigger,
                         const std::vector<Formula>& psis,
                         const std::string& signs) const {
    FormulaSet counted;
    counted.insert(trigger->lhs);
    for (std::size_t i = 0; i < psis.size(); ++i)
      counted.insert(signs[i] == '0' ? psis[i] : neg_nnf(psis[i]));
    return counted;
  }

  static bool advance(std::string& signs) {
    for (auto it = signs.rbegin(); it != signs.rend(); ++it) {
      if (*it == '0') {
        *it = '1';
        return true;
      }
      *it = '0';
    }
    return false;
  }

  void undo_frame(int x, const Succ& fr) {
    RelationExpr rel = fr.trigger->rel();
    for (const Formula& psi :
         counted_set(fr.trigger, collect_psis(x, fr.trigger), fr.signs))
      bank_.decrement(x, rel, psi);
    rec_.resize(fr.rec_mark);
  }

  // Tries the frame's current sign vector and, on failure, the following
  // ones. True: a complete clash-free subtree exists; the system is back at
  // its pre-generation state and the frame's increments are live. False:
  // all sign vectors failed; no increments remain.
  bool try_frame(int x, int depth, std::int64_t x_uid, Succ& fr) {
    RelationExpr rel = fr.trigger->rel();
    const Rel& r = fr.trigger->rel_parts.front();
    std::vector<Formula> psis = collect_psis(x, fr.trigger);
    while (true) {
      step();
      ConstraintSystem::Mark mark = s_.mark();
      int y = s_.add_var(x);
      ++stats_.nodes_created;
      stats_.peak_live_vars = std::max(
          stats_.peak_live_vars, static_cast<std::uint64_t>(s_.var_slots()));
      s_.add_edge(r, x, y);
      FormulaSet counted = counted_set(fr.trigger, psis, fr.signs);
      for (const Formula& psi : counted) {
        s_.add_formula(y, psi);
        bank_.increment(x, rel, psi);
      }
      bool bad = false;
      for (const Formula& f : s_.label(x))
        if (f->kind == FKind::Leq && f->rel_parts == fr.trigger->rel_parts &&
            bank_.get(x, rel, f->lhs) > f->bound) {
          bad = true;
          break;
        }
      if (!bad) bad = !sat(y, depth + 1, next_uid_++, x_uid, {r});
      if (!bad) {
        s_.rollback(mark);  // free the subtree; counters keep its effect
        return true;
      }
      ++stats_.backtracks;
      s_.rollback(mark);
      rec_.resize(fr.rec_mark);
      for (const Formula& psi : counted) bank_.decrement(x, rel, psi);
      if (!advance(fr.signs)) return false;
    }
  }

  bool sat(int x, int depth, std::int64_t uid, std::int64_t parent_uid,
           std::vector<Rel> rels) {
    stats_.max_depth =
        std::max(stats_.max_depth, static_cast<std::uint64_t>(depth));
    if (static_cast<std::uint64_t>(depth) > limits_.max_depth)
      throw resource_limit_error("depth limit exceeded");
    bank_.clear_var(x);
    std::vector<Disj> disjs;
    std::vector<Succ> succs;
    std::size_t cursor = 0;

    enum class Phase { Saturate, Gen, Backtrack };
    Phase phase = Phase::Saturate;
    while (true) {
      switch (phase) {
        case Phase::Saturate: {
          while (cursor < s_.label(x).size()) {
            Formula f = s_.label(x)[cursor];
            if (f->kind == FKind::And) {
              if (!s_.has(x, f->lhs) || !s_.has(x, f->rhs)) {
                step();
                s_.add_formula(x, f->lhs);
                s_.add_formula(x, f->rhs);
              }
            } else if (f->kind == FKind::Or) {
              if (!s_.has(x, f->lhs) && !s_.has(x, f->rhs)) {
                step();
                disjs.push_back({cursor + 1, s_.mark(), rec_.size(), f, 0});
                s_.add_formula(x, f->lhs);
              }
            }
            ++cursor;
          }
          phase = atomic_clash(x) ? Phase::Backtrack : Phase::Gen;
          break;
        }
        case Phase::Gen: {
          std::optional<Formula> trigger = find_trigger(x);
          if (!trigger) {
            if (record_) {
              std::vector<std::string> atoms;
              for (const Formula& f : s_.label(x))
                if (f->kind == FKind::Atom) atoms.push_back(f->atom);
              rec_.push_back({uid, parent_uid, rels, std::move(atoms)});
            }
            bank_.clear_var(x);
            return true;
          }
          std::vector<Formula> psis = collect_psis(x, *trigger);
          succs.push_back(
              {*trigger, std::string(psis.size(), '0'), rec_.size()});
          if (!try_frame(x, depth, uid, succs.back())) {
            succs.pop_back();
            phase = Phase::Backtrack;
          }
          break;
        }
        case Phase::Backtrack: {
          if (!succs.empty()) {
            Succ& fr = succs.back();
            undo_frame(x, fr);
            if (advance(fr.signs) && try_frame(x, depth, uid, fr))
              phase = Phase::Gen;
            else
              succs.pop_back();
          } else if (!disjs.empty()) {
            Disj& d = disjs.back();
            s_.rollback(d.mark);
            rec_.resize(d.rec_mark);
            if (d.which == 0) {
              d.which = 1;
              s_.add_formula(x, d.f->rhs);
              cursor = d.cursor;
              phase = Phase::Saturate;
            } else {
              disjs.pop_back();
            }
          } else {
            bank_.clear_var(x);
            return false;
          }
          break;
        }
      }
    }
  }
};

}  // namespace

Verdict solve_grk(const Formula& phi, const Limits& limits, bool want_model) {
  if (!is_nnf(phi) || !is_legacy_free(phi))
    throw std::invalid_argument("optimized engine requires a ge/le NNF input");
  if (mentions_inverse_or_intersection(phi))
    throw std::invalid_argument(
        "optimized engine does not support inverse or intersected relations");

  Verdict v;
  {
    GrkSolver solver(limits, v.stats, false);
    v.sat = solver.solve(phi);
  }
  if (v.sat && want_model) {
    // Second pass with recording enabled; the search is deterministic, so
    // the accepting branch is replayed exactly.
    SolveStats replay;
    GrkSolver solver(limits, replay, true);
    solver.solve(phi);
    auto [model, root] = solver.assemble_model();
    v.model = std::move(model);
    v.root = root;
  }
  return v;
}

}  // namespace gmlsat
