#ifndef GMLSAT_SOLVER_HPP
#define GMLSAT_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "gmlsat/csys.hpp"
#include "gmlsat/formula.hpp"
#include "gmlsat/kripke.hpp"

namespace gmlsat {

struct Limits {
  std::uint64_t max_steps = 100000000;      // rule applications
  std::uint64_t max_depth = 10000;          // live trace depth
  std::uint64_t max_constraints = 1000000;  // total constraints in the system
};

struct SolveStats {
  std::uint64_t steps = 0;
  std::uint64_t nodes_created = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t max_depth = 0;       // deepest live root-to-leaf path, in nodes
  std::uint64_t peak_live_vars = 0;  // most variables alive at once
  std::uint64_t restarts = 0;        // inverse engine only
};

class resource_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Verdict {
  bool sat = false;
  SolveStats stats;
  std::optional<KripkeStructure> model;  // witness on SAT when requested
  int root = 0;                          // witness world for the input formula
  std::optional<std::string> final_system;  // accepting system dump (debug)
};

// The unsound legacy-calculus solver, kept as an executable exhibit of the
// bug it reproduces. Input: legacy NNF (negation on atoms, dia/box
// modalities only). Not a decision procedure.
Verdict solve_incorrect(const Formula& phi, const Limits& limits = {});

// The sound-and-complete but space-hungry calculus with explicit successor
// identification; the differential-testing oracle on small inputs.
// Input: NNF, ge/le modalities over plain relation names.
Verdict solve_standard(const Formula& phi, const Limits& limits = {},
                       bool want_model = true);

// The depth-first counter-based procedure; polynomial space in the formula
// size even with binary-coded bounds. Input: NNF, ge/le, plain names.
Verdict solve_grk(const Formula& phi, const Limits& limits = {},
                  bool want_model = false);

// The trace procedure extended with inverse relations and intersections:
// predecessor-aware counters, relation-set guessing, and reset-restarts.
// Input: NNF, ge/le, relations may be inverted or intersected.
Verdict solve_grkri(const Formula& phi, const Limits& limits = {},
                    bool want_model = false);

}  // namespace gmlsat

#endif
