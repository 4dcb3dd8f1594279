#ifndef GMLSAT_FORMULA_HPP
#define GMLSAT_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gmlsat {

// Atomic relation: a relation name, possibly inverted.
struct Rel {
  std::string name;
  bool inverse = false;

  Rel inverted() const { return Rel{name, !inverse}; }
  auto operator<=>(const Rel&) const = default;
};

// A canonical, nonempty intersection of atomic relations. A plain relation
// name or a single inverse is the one-element case. Parts are sorted and
// deduplicated, so equal expressions compare equal.
class RelationExpr {
 public:
  explicit RelationExpr(Rel r);
  explicit RelationExpr(std::vector<Rel> parts);

  const std::vector<Rel>& parts() const { return parts_; }
  bool simple() const { return parts_.size() == 1; }
  const Rel& single() const { return parts_.front(); }
  bool is_plain_name() const { return simple() && !parts_.front().inverse; }

  auto operator<=>(const RelationExpr&) const = default;

 private:
  std::vector<Rel> parts_;
};

enum class FKind : std::uint8_t {
  Atom,
  Not,
  And,
  Or,
  Geq,  // <rel> >= n
  Leq,  // <rel> <= n
  Dia,  // legacy <R>^n
  Box,  // legacy [R]^n
};

class FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

class FormulaNode {
 public:
  FKind kind;
  std::string atom;               // Atom
  std::vector<Rel> rel_parts;     // Geq/Leq/Dia/Box (Dia/Box: single plain name)
  std::uint64_t bound = 0;        // Geq/Leq/Dia/Box
  Formula lhs, rhs;               // children (lhs only for Not and modalities)

  RelationExpr rel() const { return RelationExpr{rel_parts}; }
};

Formula mk_atom(std::string name);
Formula mk_not(Formula f);
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_geq(RelationExpr rel, std::uint64_t n, Formula body);
Formula mk_leq(RelationExpr rel, std::uint64_t n, Formula body);
Formula mk_dia(std::string rel_name, std::uint64_t n, Formula body);
Formula mk_box(std::string rel_name, std::uint64_t n, Formula body);

// Total structural order; the iteration order used everywhere a
// deterministic formula order is required.
int compare(const Formula& a, const Formula& b);
bool equal(const Formula& a, const Formula& b);

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const {
    return compare(a, b) < 0;
  }
};
using FormulaSet = std::set<Formula, FormulaLess>;

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, int line, int col);
  int line, col;
};

// Atom reserved for the NNF rewrite of a negated >=0 modality. User input
// may not mention it.
inline constexpr const char* kReservedFalseAtom = "p0__false";

Formula parse_formula(std::string_view text, bool allow_reserved = false);
std::string print_formula(const Formula& f);

bool is_legacy_free(const Formula& f);
bool is_nnf(const Formula& f);
bool mentions_inverse_or_intersection(const Formula& f);
bool mentions_atom(const Formula& f, std::string_view name);

// Legacy operators rewritten to >= / <= form; everything else unchanged.
Formula modernize(const Formula& f);

// Negation normal form. Requires a legacy-free input.
Formula to_nnf(const Formula& f);

// NNF over the legacy operators only (negation pushed to atoms, diamonds
// and boxes kept). Input must be legacy-only in its modalities.
Formula to_nnf_legacy(const Formula& f);

// The operator ~f: NNF of the negation of an NNF input.
Formula neg_nnf(const Formula& f);

// Closure of an NNF formula under subformulas and ~.
FormulaSet clos(const Formula& f);

struct FormulaMeasures {
  std::uint64_t size = 0;         // nodes + relation parts + bit lengths of numbers
  std::uint64_t modal_depth = 0;
  std::uint64_t norm = 0;         // defined for NNF input
};
FormulaMeasures measures(const Formula& f);

std::vector<std::string> atom_names(const Formula& f);
std::vector<std::string> relation_names(const Formula& f);

// Distinct relation expressions that appear as modality relations in
// clos(f); the counter key universe for the inverse-capable engine.
std::vector<RelationExpr> relation_exprs(const Formula& f);

}  // namespace gmlsat

#endif
