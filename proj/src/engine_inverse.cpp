#include <algorithm>
#include <stdexcept>
#include <string>

#include "gmlsat/solver.hpp"

namespace gmlsat {

namespace {

// Depth-first trace search for the logic with inverse and intersected
// relations. Differences from the plain trace engine: edges are mirrored
// (Rxy iff R^-1 yx), counters are kept per intersection occurring in the
// input and initialised from the predecessor, successor generation guesses
// a relation superset, and a constraint that must "move upwards" to a
// predecessor triggers a reset-restart of that predecessor's successors.
class GrkriSolver {
 public:
  GrkriSolver(const Formula& phi, const Limits& limits, SolveStats& stats,
              bool record)
      : limits_(limits), stats_(stats), record_(record), s_(true, false) {
    omega_ = relation_exprs(phi);
    for (const std::string& name : relation_names(phi)) {
      rbar_.push_back(Rel{name, false});
      rbar_.push_back(Rel{name, true});
    }
    std::sort(rbar_.begin(), rbar_.end());
  }

  bool solve(const Formula& phi) {
    int root = s_.add_var();
    s_.add_formula(root, phi);
    stats_.nodes_created = 1;
    stats_.peak_live_vars = 1;
    Res r = sat(root, 1, next_uid_++, -1, {});
    // The root has no predecessor, so the choose-rule can never signal past it.
    return r.kind == Res::Sat;
  }

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
  struct Res {
    enum Kind { Sat, Unsat, Restart } kind;
    Formula psi;  // Restart only
  };

  struct Entry {
    enum Kind { Disj, Succ, RestartChi } kind;
    std::size_t rec_mark = 0;
    ConstraintSystem::Mark mark;  // Disj: pre-choice; RestartChi: pre-chi
    std::size_t cursor = 0;       // saturation resume position
    Formula f;  // Disj: the disjunction; Succ: trigger; RestartChi: psi
    int which = 0;
    // Succ
    std::string signs;
    std::size_t superset_idx = 0;
    std::vector<std::pair<RelationExpr, Formula>> incs;
    // RestartChi
    CounterBank::Slice saved;
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
  std::vector<RelationExpr> omega_;
  std::vector<Rel> rbar_;
  std::map<RelationExpr, std::vector<std::vector<Rel>>> superset_cache_;
  std::vector<RecEntry> rec_;
  std::int64_t next_uid_ = 0;

  void step() {
    if (++stats_.steps > limits_.max_steps)
      throw resource_limit_error("step limit exceeded");
  }

  // Subsets of the relation universe containing omega, smallest first,
  // ties broken by the element list.
  const std::vector<std::vector<Rel>>& supersets_for(const RelationExpr& omega) {
    auto it = superset_cache_.find(omega);
    if (it != superset_cache_.end()) return it->second;
    std::vector<std::vector<Rel>> out;
    std::size_t k = rbar_.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
      std::vector<Rel> set;
      for (std::size_t i = 0; i < k; ++i)
        if (bits >> i & 1) set.push_back(rbar_[i]);
      bool covers = true;
      for (const Rel& r : omega.parts())
        if (std::find(set.begin(), set.end(), r) == set.end()) covers = false;
      if (covers) out.push_back(std::move(set));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) {
                       if (a.size() != b.size()) return a.size() < b.size();
                       return a < b;
                     });
    return superset_cache_[omega] = std::move(out);
  }

  void init_counters(int x) {
    bank_.clear_var(x);
    std::optional<int> p = s_.parent(x);
    if (!p) return;
    std::set<Rel> up = s_.edge_rels(x, *p);
    for (const RelationExpr& sigma : omega_) {
      bool covered = true;
      for (const Rel& r : sigma.parts())
        if (!up.count(r)) covered = false;
      if (!covered) continue;
      for (const Formula& psi : s_.label(*p)) bank_.set(x, sigma, psi, 1);
    }
  }

  bool clash_at(int x) const {
    for (const Formula& f : s_.label(x)) {
      if (f->kind == FKind::Atom && s_.has(x, mk_not(f))) return true;
      if (f->kind == FKind::Leq &&
          bank_.get(x, f->rel(), f->lhs) > f->bound)
        return true;
    }
    return false;
  }

  // A constraint whose body must be decided at the predecessor.
  std::optional<Formula> choose_toward_parent(int x) const {
    std::optional<int> p = s_.parent(x);
    if (!p) return std::nullopt;
    for (const Formula& f : s_.label(x)) {
      if (f->kind != FKind::Geq && f->kind != FKind::Leq) continue;
      bool edge = false;
      for (const Rel& r : f->rel_parts)
        if (s_.has_edge(r, x, *p)) edge = true;
      if (!edge) continue;
      if (!s_.has(*p, f->lhs) && !s_.has(*p, neg_nnf(f->lhs)))
        return f->lhs;
    }
    return std::nullopt;
  }

  std::optional<Formula> find_trigger(int x) const {
    for (const Formula& f : s_.label(x))
      if (f->kind == FKind::Geq && bank_.get(x, f->rel(), f->lhs) < f->bound)
        return f;
    return std::nullopt;
  }

  // Bodies of the modal constraints at x whose relation parts are all in
  // the guessed edge set; only those can count the new successor, so only
  // their signs need guessing.
  std::vector<Formula> collect_psis(int x, const std::vector<Rel>& superset) const {
    FormulaSet set;
    for (const Formula& f : s_.label(x)) {
      if (f->kind != FKind::Geq && f->kind != FKind::Leq) continue;
      bool covered = true;
      for (const Rel& r : f->rel_parts)
        if (std::find(superset.begin(), superset.end(), r) == superset.end())
          covered = false;
      if (covered) set.insert(f->lhs);
    }
    return {set.begin(), set.end()};
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

  bool advance_frame(int x, Entry& fr,
                     const std::vector<std::vector<Rel>>& supersets) {
    if (advance(fr.signs)) return true;
    if (++fr.superset_idx >= supersets.size()) return false;
    fr.signs.assign(collect_psis(x, supersets[fr.superset_idx]).size(), '0');
    return true;
  }

  void undo_frame(int x, Entry& fr) {
    for (const auto& [sigma, psi] : fr.incs) bank_.decrement(x, sigma, psi);
    fr.incs.clear();
    rec_.resize(fr.rec_mark);
  }

  // Attempts the frame's current guess and the following ones. Sat: subtree
  // established, increments live, system back at its pre-generation state.
  // Unsat: guesses exhausted, no increments remain. Restart: the child needs
  // a decision at x; the frame keeps its increments and goes dormant.
  Res try_frame(int x, int depth, std::int64_t x_uid, Entry& fr) {
    const std::vector<std::vector<Rel>>& supersets =
        supersets_for(fr.f->rel());
    while (true) {
      step();
      const std::vector<Rel>& superset = supersets[fr.superset_idx];
      std::vector<Formula> psis = collect_psis(x, superset);
      ConstraintSystem::Mark mark = s_.mark();
      int y = s_.add_var(x);
      ++stats_.nodes_created;
      stats_.peak_live_vars = std::max(
          stats_.peak_live_vars, static_cast<std::uint64_t>(s_.var_slots()));
      for (const Rel& r : superset) s_.add_edge(r, x, y);
      s_.add_formula(y, fr.f->lhs);
      FormulaSet counted;
      for (std::size_t i = 0; i < psis.size(); ++i) {
        Formula chi = fr.signs[i] == '0' ? psis[i] : neg_nnf(psis[i]);
        s_.add_formula(y, chi);
        counted.insert(chi);
      }
      for (const RelationExpr& sigma : omega_) {
        bool covered = true;
        for (const Rel& r : sigma.parts())
          if (std::find(superset.begin(), superset.end(), r) ==
              superset.end())
            covered = false;
        if (!covered) continue;
        for (const Formula& psi : counted) {
          bank_.increment(x, sigma, psi);
          fr.incs.push_back({sigma, psi});
        }
      }
      bool bad = false;
      for (const Formula& f : s_.label(x))
        if (f->kind == FKind::Leq &&
            bank_.get(x, f->rel(), f->lhs) > f->bound) {
          bad = true;
          break;
        }
      if (!bad) {
        Res res = sat(y, depth + 1, next_uid_++, x_uid, superset);
        if (res.kind == Res::Sat) {
          s_.rollback(mark);  // free the subtree; counters keep its effect
          return {Res::Sat, {}};
        }
        if (res.kind == Res::Restart) {
          s_.rollback(mark);
          rec_.resize(fr.rec_mark);
          return res;  // frame stays dormant with its increments applied
        }
      }
      ++stats_.backtracks;
      s_.rollback(mark);
      rec_.resize(fr.rec_mark);
      for (const auto& [sigma, psi] : fr.incs) bank_.decrement(x, sigma, psi);
      fr.incs.clear();
      if (!advance_frame(x, fr, supersets)) return {Res::Unsat, {}};
    }
  }

  enum class Phase { Init, Saturate, Gen, Backtrack };

  // A child asked for a decision on psi at x. The in-progress and completed
  // successor frames stay dormant below the new choice point; the chi
  // branches re-enter counter initialisation and regenerate all successors.
  Phase handle_restart(int x, std::vector<Entry>& stack, std::size_t cursor,
                       const Formula& psi) {
    ++stats_.restarts;
    Entry e;
    e.kind = Entry::RestartChi;
    e.mark = s_.mark();
    e.rec_mark = rec_.size();
    e.cursor = cursor;
    e.f = psi;
    e.saved = bank_.snapshot(x);
    stack.push_back(std::move(e));
    step();
    s_.add_formula(x, psi);
    return Phase::Init;
  }

  Res sat(int x, int depth, std::int64_t uid, std::int64_t parent_uid,
          std::vector<Rel> rels) {
    stats_.max_depth =
        std::max(stats_.max_depth, static_cast<std::uint64_t>(depth));
    if (static_cast<std::uint64_t>(depth) > limits_.max_depth)
      throw resource_limit_error("depth limit exceeded");
    if (s_.constraint_count() > limits_.max_constraints)
      throw resource_limit_error("constraint limit exceeded");
    std::vector<Entry> stack;
    std::size_t cursor = 0;
    Phase phase = Phase::Init;
    while (true) {
      switch (phase) {
        case Phase::Init: {
          init_counters(x);
          phase = Phase::Saturate;
          break;
        }
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
                Entry e;
                e.kind = Entry::Disj;
                e.cursor = cursor + 1;
                e.mark = s_.mark();
                e.rec_mark = rec_.size();
                e.f = f;
                stack.push_back(std::move(e));
                s_.add_formula(x, f->lhs);
              }
            }
            ++cursor;
          }
          if (clash_at(x)) {
            phase = Phase::Backtrack;
            break;
          }
          if (std::optional<Formula> psi = choose_toward_parent(x))
            return {Res::Restart, *psi};
          phase = Phase::Gen;
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
            return {Res::Sat, {}};
          }
          Entry e;
          e.kind = Entry::Succ;
          e.rec_mark = rec_.size();
          e.f = *trigger;
          e.signs = std::string(
              collect_psis(x, supersets_for((*trigger)->rel()).front()).size(),
              '0');
          stack.push_back(std::move(e));
          Res res = try_frame(x, depth, uid, stack.back());
          if (res.kind == Res::Sat) break;  // stay in Gen
          if (res.kind == Res::Unsat) {
            stack.pop_back();
            phase = Phase::Backtrack;
            break;
          }
          phase = handle_restart(x, stack, cursor, res.psi);
          break;
        }
        case Phase::Backtrack: {
          if (stack.empty()) {
            bank_.clear_var(x);
            return {Res::Unsat, {}};
          }
          Entry& e = stack.back();
          if (e.kind == Entry::Succ) {
            undo_frame(x, e);
            if (!advance_frame(x, e, supersets_for(e.f->rel()))) {
              stack.pop_back();
              break;
            }
            Res res = try_frame(x, depth, uid, e);
            if (res.kind == Res::Sat)
              phase = Phase::Gen;
            else if (res.kind == Res::Unsat)
              stack.pop_back();
            else
              phase = handle_restart(x, stack, cursor, res.psi);
          } else if (e.kind == Entry::Disj) {
            s_.rollback(e.mark);
            rec_.resize(e.rec_mark);
            if (e.which == 0) {
              e.which = 1;
              step();
              s_.add_formula(x, e.f->rhs);
              cursor = e.cursor;
              phase = Phase::Saturate;
            } else {
              stack.pop_back();
            }
          } else {  // RestartChi
            s_.rollback(e.mark);
            rec_.resize(e.rec_mark);
            if (e.which == 0) {
              e.which = 1;
              step();
              s_.add_formula(x, neg_nnf(e.f));
              cursor = e.cursor;
              phase = Phase::Init;
            } else {
              bank_.restore(x, e.saved);
              // the label is back at its fully saturated pre-restart state;
              // a stale cursor would let a later restart's chi skip saturation
              cursor = s_.label(x).size();
              stack.pop_back();
            }
          }
          break;
        }
      }
    }
  }
};

}  // namespace

Verdict solve_grkri(const Formula& phi, const Limits& limits, bool want_model) {
  if (!is_nnf(phi) || !is_legacy_free(phi))
    throw std::invalid_argument("inverse engine requires a ge/le NNF input");

  Verdict v;
  {
    GrkriSolver solver(phi, limits, v.stats, false);
    v.sat = solver.solve(phi);
  }
  if (v.sat && want_model) {
    SolveStats replay;
    GrkriSolver solver(phi, limits, replay, true);
    solver.solve(phi);
    auto [model, root] = solver.assemble_model();
    v.model = std::move(model);
    v.root = root;
  }
  return v;
}

}  // namespace gmlsat
