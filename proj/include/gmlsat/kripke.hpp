#ifndef GMLSAT_KRIPKE_HPP
#define GMLSAT_KRIPKE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gmlsat/formula.hpp"

namespace gmlsat {

class ConstraintSystem;

// Finite Kripke structure: worlds 0..size-1, named accessibility relations,
// valuation. Immutable in practice after construction; inverse relations are
// always computed from the stored edges, never materialized.
class KripkeStructure {
 public:
  explicit KripkeStructure(int worlds = 0) : worlds_(worlds) {}

  int worlds() const { return worlds_; }
  int add_world();
  void add_edge(const std::string& rel, int from, int to);
  void set_atom(const std::string& atom, int world);

  bool has_edge(const Rel& rel, int from, int to) const;
  bool holds_atom(const std::string& atom, int world) const;

  const std::map<std::string, std::set<std::pair<int, int>>>& relations() const {
    return relations_;
  }
  const std::map<std::string, std::set<int>>& valuation() const {
    return valuation_;
  }

 private:
  void check_world(int w) const;

  int worlds_;
  std::map<std::string, std::set<std::pair<int, int>>> relations_;
  std::map<std::string, std::set<int>> valuation_;
};

// Number of rel-successors of x satisfying f.
std::uint64_t succ_count(const KripkeStructure& m, int x, const RelationExpr& rel,
                         const Formula& f);

// Truth at a world; f must be legacy-free.
bool check(const KripkeStructure& m, int x, const Formula& f);

// The structure read off a constraint system: worlds are the live variables,
// edges the stored plain-name edge constraints, valuation the atom constraints.
// Returns the structure plus the world index of each variable.
std::pair<KripkeStructure, std::map<int, int>> canonical_structure(
    const ConstraintSystem& s);

enum class EnumStatus { Found, NoneFound, Inconclusive };

struct EnumResult {
  EnumStatus status = EnumStatus::NoneFound;
  KripkeStructure model;
  int world = 0;
};

// Bounded-model enumeration: world count ascending, then the combined
// edge/valuation bitmap as a binary counter (edge bits are the low bits,
// ordered by relation name then source-major world pair; valuation bits
// follow, ordered by atom name then world). First satisfying structure and
// world wins. Only f's atoms and relation names are enumerated.
EnumResult enumerate_models(const Formula& f, int max_worlds,
                            std::uint64_t max_structures = 1u << 22);

// Line-based text format: "world <id>" / "rel <name> <id> <id>" /
// "val <id> <atom>" / "root <id>", ids w0..wN, lines sorted within sections.
std::string model_to_text(const KripkeStructure& m, int root);
std::pair<KripkeStructure, int> model_from_text(const std::string& text);

}  // namespace gmlsat

#endif
