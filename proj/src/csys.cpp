#include "gmlsat/csys.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace gmlsat {

namespace {

std::string rel_token(const Rel& r) {
  return r.inverse ? r.name + "^-1" : r.name;
}

}  // namespace

int ConstraintSystem::add_var(std::optional<int> parent) {
  int id = static_cast<int>(vars_.size());
  VarState v;
  v.parent = parent;
  vars_.push_back(std::move(v));
  if (parent) vars_[*parent].children.push_back(id);
  return id;
}

std::vector<int> ConstraintSystem::vars() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(vars_.size()); ++i)
    if (vars_[i].alive) out.push_back(i);
  return out;
}

bool ConstraintSystem::add_formula(int x, const Formula& f) {
  VarState& v = vars_[x];
  if (!v.label_set.insert(f).second) return false;
  v.label.push_back(f);
  ++constraint_count_;
  if (maintain_counts_) bump_counts_for_formula(x, f);
  return true;
}

void ConstraintSystem::add_edge_one(const Rel& rel, int x, int y) {
  if (!edge_set_.insert({rel, x, y}).second) return;
  vars_[x].out_edges.push_back({rel, y});
  vars_[y].in_edges.push_back({rel, x});
  ++constraint_count_;
  if (maintain_counts_) bump_counts_for_edge(rel, x, y);
}

void ConstraintSystem::add_edge(const Rel& rel, int x, int y) {
  add_edge_one(rel, x, y);
  if (inverse_mode_) add_edge_one(rel.inverted(), y, x);
}

bool ConstraintSystem::has_edge(const Rel& rel, int x, int y) const {
  return edge_set_.count({rel, x, y}) > 0;
}

std::set<Rel> ConstraintSystem::edge_rels(int x, int y) const {
  std::set<Rel> out;
  for (const auto& [rel, to] : vars_[x].out_edges)
    if (to == y) out.insert(rel);
  return out;
}

std::uint64_t ConstraintSystem::count(int x, const RelationExpr& rel,
                                      const Formula& psi) const {
  std::set<int> targets;
  for (const auto& [r, to] : vars_[x].out_edges) targets.insert(to);
  std::uint64_t n = 0;
  for (int y : targets) {
    bool connected = true;
    for (const Rel& r : rel.parts())
      if (!has_edge(r, x, y)) {
        connected = false;
        break;
      }
    if (connected && has(y, psi)) ++n;
  }
  return n;
}

void ConstraintSystem::bump_counts_for_formula(int y, const Formula& f) {
  // Every in-edge (r, x -> y) gains a counted pair for psi = f.
  for (const auto& [r, from] : vars_[y].in_edges) ++counts_[{from, r, f}];
}

void ConstraintSystem::bump_counts_for_edge(const Rel& rel, int x, int y) {
  for (const Formula& f : vars_[y].label) ++counts_[{x, rel, f}];
}

std::uint64_t ConstraintSystem::fast_count(int x, const Rel& rel,
                                           const Formula& psi) const {
  assert(maintain_counts_);
  auto it = counts_.find({x, rel, psi});
  return it == counts_.end() ? 0 : it->second;
}

void ConstraintSystem::rebuild_counts() {
  counts_.clear();
  for (int x = 0; x < static_cast<int>(vars_.size()); ++x) {
    if (!vars_[x].alive) continue;
    for (const auto& [r, to] : vars_[x].out_edges)
      for (const Formula& f : vars_[to].label) ++counts_[{x, r, f}];
  }
}

std::optional<ClashReason> ConstraintSystem::detect_clash(ClashMode mode) const {
  for (int x = 0; x < static_cast<int>(vars_.size()); ++x) {
    const VarState& v = vars_[x];
    if (!v.alive) continue;
    for (const Formula& f : v.label) {
      if (f->kind == FKind::Atom && v.label_set.count(mk_not(f)))
        return ClashReason{x, "atomic clash on " + f->atom};
      if (f->kind == FKind::Not && v.label_set.count(f->lhs))
        return ClashReason{x, "atomic clash on " + f->lhs->atom};
      if (mode == ClashMode::Legacy && f->kind == FKind::Dia) {
        Formula neg_body = neg_nnf(f->lhs);
        for (const Formula& g : v.label)
          if (g->kind == FKind::Box && g->rel_parts == f->rel_parts &&
              f->bound <= g->bound && equal(g->lhs, neg_body))
            return ClashReason{x, "diamond/box pair clash on " +
                                      print_formula(f->lhs)};
      }
      if (mode != ClashMode::Legacy && f->kind == FKind::Leq) {
        if (count(x, f->rel(), f->lhs) > f->bound)
          return ClashReason{x, "counting clash on " + print_formula(f)};
      }
    }
  }
  return std::nullopt;
}

void ConstraintSystem::replace_var(int y, int z) {
  assert(y != z && vars_[y].alive && vars_[z].alive);
  VarState& vy = vars_[y];
  VarState& vz = vars_[z];
  for (const Formula& f : vy.label)
    if (vz.label_set.insert(f).second) vz.label.push_back(f);
  // Rewrite edges touching y, then rebuild the per-var edge lists.
  std::vector<std::tuple<Rel, int, int>> rewritten;
  for (const auto& [r, a, b] : edge_set_)
    rewritten.push_back({r, a == y ? z : a, b == y ? z : b});
  edge_set_.clear();
  for (auto& vs : vars_) {
    vs.out_edges.clear();
    vs.in_edges.clear();
  }
  for (auto& [r, a, b] : rewritten)
    if (edge_set_.insert({r, a, b}).second) {
      vars_[a].out_edges.push_back({r, b});
      vars_[b].in_edges.push_back({r, a});
    }
  // Reparent y's children and drop y from the forest.
  for (int c : vy.children) {
    vars_[c].parent = z;
    vz.children.push_back(c);
  }
  if (vy.parent) {
    auto& sibs = vars_[*vy.parent].children;
    std::erase(sibs, y);
  }
  vy = VarState{};
  vy.alive = false;
  constraint_count_ = 0;
  for (const auto& vs : vars_)
    if (vs.alive) constraint_count_ += vs.label.size();
  constraint_count_ += edge_set_.size();
  if (maintain_counts_) rebuild_counts();
}

bool ConstraintSystem::is_safe_replacement(int y, int z, ClashMode mode) const {
  ConstraintSystem after = *this;
  after.replace_var(y, z);
  for (int x = 0; x < static_cast<int>(vars_.size()); ++x) {
    const VarState& v = vars_[x];
    if (!v.alive) continue;
    for (const Formula& f : v.label) {
      bool legacy_trigger = mode == ClashMode::Legacy && f->kind == FKind::Dia;
      bool graded_trigger = mode != ClashMode::Legacy && f->kind == FKind::Geq;
      if (!legacy_trigger && !graded_trigger) continue;
      bool edge_y = false, edge_z = false;
      for (const Rel& r : f->rel_parts) {
        edge_y = edge_y || has_edge(r, x, y);
        edge_z = edge_z || has_edge(r, x, z);
      }
      if (!edge_y || !edge_z) continue;
      int x_after = x == y ? z : x;
      std::uint64_t c = after.count(x_after, f->rel(), f->lhs);
      if (legacy_trigger ? c <= f->bound : c < f->bound) return false;
    }
  }
  return true;
}

void ConstraintSystem::delete_subtrees(int y) {
  std::set<int> doomed;
  std::vector<int> work(vars_[y].children.begin(), vars_[y].children.end());
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    if (!doomed.insert(v).second) continue;
    for (int c : vars_[v].children) work.push_back(c);
  }
  for (auto it = edge_set_.begin(); it != edge_set_.end();) {
    auto [r, a, b] = *it;
    if (doomed.count(a) || doomed.count(b))
      it = edge_set_.erase(it);
    else
      ++it;
  }
  for (int x = 0; x < static_cast<int>(vars_.size()); ++x) {
    auto& vs = vars_[x];
    if (doomed.count(x)) {
      vs = VarState{};
      vs.alive = false;
    } else {
      std::erase_if(vs.out_edges,
                    [&](const auto& e) { return doomed.count(e.second) > 0; });
      std::erase_if(vs.in_edges,
                    [&](const auto& e) { return doomed.count(e.second) > 0; });
      std::erase_if(vs.children, [&](int c) { return doomed.count(c) > 0; });
    }
  }
  constraint_count_ = 0;
  for (const auto& vs : vars_)
    if (vs.alive) constraint_count_ += vs.label.size();
  constraint_count_ += edge_set_.size();
  if (maintain_counts_) rebuild_counts();
}

std::string ConstraintSystem::dump() const {
  std::vector<std::string> lines;
  for (int x = 0; x < static_cast<int>(vars_.size()); ++x) {
    if (!vars_[x].alive) continue;
    for (const Formula& f : vars_[x].label)
      lines.push_back("c " + std::to_string(x) + " " + print_formula(f));
  }
  for (const auto& [r, a, b] : edge_set_)
    lines.push_back("e " + rel_token(r) + " " + std::to_string(a) + " " +
                    std::to_string(b));
  std::sort(lines.begin(), lines.end());
  std::ostringstream out;
  for (const auto& l : lines) out << l << '\n';
  return out.str();
}

ConstraintSystem::Mark ConstraintSystem::mark() const {
  Mark m;
  m.var_count = static_cast<int>(vars_.size());
  m.constraints = constraint_count_;
  m.sizes.reserve(vars_.size());
  for (const auto& v : vars_)
    m.sizes.push_back({v.label.size(), v.out_edges.size()});
  return m;
}

void ConstraintSystem::erase_in_edge(int to, const Rel& rel, int from) {
  auto& ie = vars_[to].in_edges;
  for (auto it = ie.rbegin(); it != ie.rend(); ++it)
    if (it->first == rel && it->second == from) {
      ie.erase(std::next(it).base());
      return;
    }
}

void ConstraintSystem::rollback(const Mark& m) {
  assert(!maintain_counts_);
  for (int x = static_cast<int>(vars_.size()) - 1; x >= m.var_count; --x) {
    VarState& v = vars_[x];
    assert(v.alive);
    for (const auto& [r, to] : v.out_edges) {
      edge_set_.erase({r, x, to});
      if (to < m.var_count) erase_in_edge(to, r, x);
    }
    if (v.parent && *v.parent < m.var_count) {
      auto& sibs = vars_[*v.parent].children;
      std::erase(sibs, x);
    }
  }
  vars_.resize(m.var_count);
  for (int x = 0; x < m.var_count; ++x) {
    VarState& v = vars_[x];
    auto [lsz, esz] = m.sizes[x];
    while (v.label.size() > lsz) {
      v.label_set.erase(v.label.back());
      v.label.pop_back();
    }
    while (v.out_edges.size() > esz) {
      auto [r, to] = v.out_edges.back();
      edge_set_.erase({r, x, to});
      if (to < m.var_count) erase_in_edge(to, r, x);
      v.out_edges.pop_back();
    }
  }
  constraint_count_ = m.constraints;
}

std::uint64_t CounterBank::get(int var, const RelationExpr& rel,
                               const Formula& psi) const {
  auto sit = slices_.find(var);
  if (sit == slices_.end()) return 0;
  auto it = sit->second.find({rel, psi});
  return it == sit->second.end() ? 0 : it->second;
}

void CounterBank::set(int var, const RelationExpr& rel, const Formula& psi,
                      std::uint64_t v) {
  slices_[var][{rel, psi}] = v;
}

void CounterBank::increment(int var, const RelationExpr& rel, const Formula& psi) {
  std::uint64_t& v = slices_[var][{rel, psi}];
  if (v == UINT64_MAX) throw std::overflow_error("successor counter overflow");
  ++v;
}

void CounterBank::decrement(int var, const RelationExpr& rel, const Formula& psi) {
  std::uint64_t& v = slices_[var][{rel, psi}];
  assert(v > 0);
  --v;
}

void CounterBank::clear_var(int var) { slices_.erase(var); }

CounterBank::Slice CounterBank::snapshot(int var) const {
  auto it = slices_.find(var);
  return it == slices_.end() ? Slice{} : it->second;
}

void CounterBank::restore(int var, Slice slice) {
  slices_[var] = std::move(slice);
}

bool CounterBank::validate(const ConstraintSystem& s, int var) const {
  auto it = slices_.find(var);
  if (it == slices_.end()) return true;
  for (const auto& [key, value] : it->second)
    if (s.count(var, key.first, key.second) != value) return false;
  return true;
}

}  // namespace gmlsat
