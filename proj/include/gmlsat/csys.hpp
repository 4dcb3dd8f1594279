#ifndef GMLSAT_CSYS_HPP
#define GMLSAT_CSYS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gmlsat/formula.hpp"

namespace gmlsat {

enum class ClashMode { Legacy, Graded, GradedInverse };

struct ClashReason {
  int var = 0;
  std::string description;
};

// A constraint system: formula constraints "x |= phi" and edge constraints
// "Rxy", plus the successor ordering (a forest over the variables, recorded
// as a parent map). Variable ids are creation-order integers. In inverse
// mode, adding an edge also adds the mirrored inverse edge, keeping the
// "Rxy iff R^-1 yx" invariant. Copyable; the rewriting engines branch on
// copies, the trace engines use mark/rollback (valid only while mutations
// are pure additions).
class ConstraintSystem {
 public:
  explicit ConstraintSystem(bool inverse_mode = false,
                            bool maintain_counts = false)
      : inverse_mode_(inverse_mode), maintain_counts_(maintain_counts) {}

  bool inverse_mode() const { return inverse_mode_; }

  int add_var(std::optional<int> parent = std::nullopt);
  bool alive(int v) const { return vars_[v].alive; }
  std::vector<int> vars() const;
  int var_slots() const { return static_cast<int>(vars_.size()); }
  std::optional<int> parent(int v) const { return vars_[v].parent; }
  const std::vector<int>& children(int v) const { return vars_[v].children; }

  // Returns false if the constraint was already present.
  bool add_formula(int x, const Formula& f);
  void add_edge(const Rel& rel, int x, int y);

  const std::vector<Formula>& label(int x) const { return vars_[x].label; }
  bool has(int x, const Formula& f) const { return vars_[x].label_set.count(f) > 0; }
  bool has_edge(const Rel& rel, int x, int y) const;
  const std::vector<std::pair<Rel, int>>& out_edges(int x) const {
    return vars_[x].out_edges;
  }
  // Relations on edges from x to y.
  std::set<Rel> edge_rels(int x, int y) const;

  std::uint64_t constraint_count() const { return constraint_count_; }

  // #omega^S(x, psi) by scan; the reference count.
  std::uint64_t count(int x, const RelationExpr& rel, const Formula& psi) const;
  // Indexed count for simple relations; requires maintain_counts.
  std::uint64_t fast_count(int x, const Rel& rel, const Formula& psi) const;

  std::optional<ClashReason> detect_clash(ClashMode mode) const;

  // [z/y]S: every occurrence of y rewritten to z; y dies.
  void replace_var(int y, int z);
  bool is_safe_replacement(int y, int z, ClashMode mode) const;

  // Removes every constraint mentioning a strict successor-descendant of y.
  void delete_subtrees(int y);

  // Debug dump, sorted: "c <var> <formula>" / "e <rel> <var> <var>".
  std::string dump() const;

  struct Mark {
    int var_count;
    std::uint64_t constraints;
    std::vector<std::pair<std::size_t, std::size_t>> sizes;  // label, edges per var
  };
  Mark mark() const;
  void rollback(const Mark& m);

 private:
  struct VarState {
    bool alive = true;
    std::optional<int> parent;
    std::vector<int> children;
    std::vector<Formula> label;
    FormulaSet label_set;
    std::vector<std::pair<Rel, int>> out_edges;
    std::vector<std::pair<Rel, int>> in_edges;
  };

  struct CountKey {
    int from;
    Rel rel;
    Formula psi;
    bool operator<(const CountKey& o) const {
      if (from != o.from) return from < o.from;
      if (rel != o.rel) return rel < o.rel;
      return compare(psi, o.psi) < 0;
    }
  };

  void add_edge_one(const Rel& rel, int x, int y);
  void bump_counts_for_formula(int y, const Formula& f);
  void bump_counts_for_edge(const Rel& rel, int x, int y);
  void rebuild_counts();
  void erase_in_edge(int to, const Rel& rel, int from);

  bool inverse_mode_;
  bool maintain_counts_;
  std::vector<VarState> vars_;
  std::set<std::tuple<Rel, int, int>> edge_set_;
  std::uint64_t constraint_count_ = 0;
  std::map<CountKey, std::uint64_t> counts_;
};

// Live counters #omega^S(x, psi) for the trace engines, one slice per
// variable. Values are exact with respect to the increments applied by the
// engine; validate() cross-checks a slice against a scan of the system.
class CounterBank {
 public:
  struct KeyLess {
    bool operator()(const std::pair<RelationExpr, Formula>& a,
                    const std::pair<RelationExpr, Formula>& b) const {
      if (a.first != b.first) return a.first < b.first;
      return compare(a.second, b.second) < 0;
    }
  };
  using Slice =
      std::map<std::pair<RelationExpr, Formula>, std::uint64_t, KeyLess>;

  std::uint64_t get(int var, const RelationExpr& rel, const Formula& psi) const;
  void set(int var, const RelationExpr& rel, const Formula& psi, std::uint64_t v);
  void increment(int var, const RelationExpr& rel, const Formula& psi);
  void decrement(int var, const RelationExpr& rel, const Formula& psi);
  void clear_var(int var);

  Slice snapshot(int var) const;
  void restore(int var, Slice slice);

  // Cross-check a slice against a scan of the system; meaningful right
  // after a generation step, before the new child's label grows.
  bool validate(const ConstraintSystem& s, int var) const;

 private:
  std::map<int, Slice> slices_;
};

}  // namespace gmlsat

#endif
