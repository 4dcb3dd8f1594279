#include <algorithm>
#include <deque>
#include <stdexcept>

#include "gmlsat/solver.hpp"

namespace gmlsat {

namespace {

struct PendingChoose {
  int x;
  Formula f;  // the modal constraint at x
  int y;      // the successor needing the body or its negation
};

// Search state, copied at don't-know choice points. The queues make rule
// applicability checks incremental: a constraint enters a queue when added
// and is dropped once its rule can never apply again.
struct State {
  ConstraintSystem s{false, true};
  std::deque<std::pair<int, Formula>> pending;  // and/or saturation
  std::deque<PendingChoose> pending_choose;
  std::vector<std::pair<int, Formula>> geq;
  std::vector<std::pair<int, Formula>> leq;
  bool clash = false;
  int alive = 0;
};

void add(State& st, int x, const Formula& f) {
  if (!st.s.add_formula(x, f)) return;
  if (f->kind == FKind::Atom && st.s.has(x, mk_not(f))) st.clash = true;
  if (f->kind == FKind::Not && st.s.has(x, f->lhs)) st.clash = true;
  if (f->kind == FKind::And || f->kind == FKind::Or)
    st.pending.push_back({x, f});
  if (f->kind == FKind::Geq) st.geq.push_back({x, f});
  if (f->kind == FKind::Leq) st.leq.push_back({x, f});
  if (f->kind == FKind::Geq || f->kind == FKind::Leq)
    for (const auto& [rel, y] : st.s.out_edges(x))
      if (rel == f->rel_parts.front())
        st.pending_choose.push_back({x, f, y});
}

void add_edge(State& st, const Rel& rel, int x, int y) {
  st.s.add_edge(rel, x, y);
  for (const Formula& f : st.s.label(x))
    if ((f->kind == FKind::Geq || f->kind == FKind::Leq) &&
        f->rel_parts.front() == rel)
      st.pending_choose.push_back({x, f, y});
}

// After a merge the saturation queues are stale; labels stay saturated
// (a union of saturated labels is saturated), so only the lists and the
// clash flag need rebuilding.
void rebuild(State& st) {
  st.pending.clear();
  st.pending_choose.clear();
  st.geq.clear();
  st.leq.clear();
  st.clash = false;
  std::vector<int> live = st.s.vars();
  st.alive = static_cast<int>(live.size());
  for (int x : live)
    for (const Formula& f : st.s.label(x)) {
      if (f->kind == FKind::Atom && st.s.has(x, mk_not(f))) st.clash = true;
      if (f->kind == FKind::Geq) st.geq.push_back({x, f});
      if (f->kind == FKind::Leq) st.leq.push_back({x, f});
    }
}

class StandardSearch {
 public:
  StandardSearch(const Limits& limits, SolveStats& stats)
      : limits_(limits), stats_(stats) {}

  bool search(State st, std::optional<ConstraintSystem>& out) {
    while (true) {
      if (st.clash) return false;
      if (st.s.constraint_count() > limits_.max_constraints)
        throw resource_limit_error("constraint limit exceeded");

      if (!st.pending.empty()) {
        auto [x, f] = st.pending.front();
        st.pending.pop_front();
        if (f->kind == FKind::And) {
          if (st.s.has(x, f->lhs) && st.s.has(x, f->rhs)) continue;
          step();
          add(st, x, f->lhs);
          add(st, x, f->rhs);
        } else {
          if (st.s.has(x, f->lhs) || st.s.has(x, f->rhs)) continue;
          step();
          for (const Formula& chi : {f->lhs, f->rhs}) {
            State branch = st;
            add(branch, x, chi);
            if (search(std::move(branch), out)) return true;
            ++stats_.backtracks;
          }
          return false;
        }
        continue;
      }

      if (!st.pending_choose.empty()) {
        PendingChoose pc = st.pending_choose.front();
        st.pending_choose.pop_front();
        if (!st.s.alive(pc.x) || !st.s.alive(pc.y)) continue;
        if (!st.s.has_edge(pc.f->rel_parts.front(), pc.x, pc.y)) continue;
        Formula psi = pc.f->lhs;
        Formula npsi = neg_nnf(psi);
        if (st.s.has(pc.y, psi) || st.s.has(pc.y, npsi)) continue;
        step();
        for (const Formula& chi : {psi, npsi}) {
          State branch = st;
          add(branch, pc.y, chi);
          if (search(std::move(branch), out)) return true;
          ++stats_.backtracks;
        }
        return false;
      }

      // le-rule: a violated bound must be repaired by a safe merge; if no
      // safe merge exists the violation is a clash.
      bool violated = false;
      for (auto& [x, f] : st.leq) {
        if (!st.s.alive(x)) continue;
        if (st.s.fast_count(x, f->rel_parts.front(), f->lhs) <= f->bound)
          continue;
        violated = true;
        std::vector<int> ys;
        for (const auto& [rel, y] : st.s.out_edges(x))
          if (rel == f->rel_parts.front() && st.s.has(y, f->lhs) &&
              std::find(ys.begin(), ys.end(), y) == ys.end())
            ys.push_back(y);
        std::sort(ys.begin(), ys.end());
        step();
        for (int y : ys) {
          for (int z : ys) {
            if (y == z) continue;
            if (!st.s.is_safe_replacement(y, z, ClashMode::Graded)) continue;
            State branch = st;
            branch.s.replace_var(y, z);
            rebuild(branch);
            if (search(std::move(branch), out)) return true;
            ++stats_.backtracks;
          }
        }
        break;
      }
      if (violated) return false;

      // ge-rule.
      bool applied = false;
      for (auto& [x, f] : st.geq) {
        if (!st.s.alive(x)) continue;
        if (st.s.fast_count(x, f->rel_parts.front(), f->lhs) >= f->bound)
          continue;
        step();
        int y = st.s.add_var(x);
        ++st.alive;
        ++stats_.nodes_created;
        note_new_var(st, y);
        add_edge(st, f->rel_parts.front(), x, y);
        add(st, y, f->lhs);
        applied = true;
        break;
      }
      if (applied) continue;

      out = st.s;
      return true;
    }
  }

 private:
  const Limits& limits_;
  SolveStats& stats_;

  void step() {
    if (++stats_.steps > limits_.max_steps)
      throw resource_limit_error("step limit exceeded");
  }

  void note_new_var(const State& st, int y) {
    stats_.peak_live_vars =
        std::max(stats_.peak_live_vars, static_cast<std::uint64_t>(st.alive));
    std::uint64_t depth = 1;
    for (std::optional<int> p = st.s.parent(y); p; p = st.s.parent(*p)) ++depth;
    stats_.max_depth = std::max(stats_.max_depth, depth);
    if (depth > limits_.max_depth)
      throw resource_limit_error("depth limit exceeded");
  }
};

}  // namespace

Verdict solve_standard(const Formula& phi, const Limits& limits,
                       bool want_model) {
  if (!is_nnf(phi) || !is_legacy_free(phi))
    throw std::invalid_argument("standard engine requires a ge/le NNF input");
  if (mentions_inverse_or_intersection(phi))
    throw std::invalid_argument(
        "standard engine does not support inverse or intersected relations");

  Verdict v;
  v.stats.nodes_created = 1;
  v.stats.peak_live_vars = 1;
  v.stats.max_depth = 1;
  State st;
  int root = st.s.add_var();
  st.alive = 1;
  add(st, root, phi);
  StandardSearch search(limits, v.stats);
  std::optional<ConstraintSystem> done;
  v.sat = search.search(std::move(st), done);
  if (v.sat && done) {
    v.final_system = done->dump();
    if (want_model) {
      auto [model, world_of] = canonical_structure(*done);
      v.model = std::move(model);
      v.root = world_of.at(root);
    }
  }
  return v;
}

}  // namespace gmlsat
