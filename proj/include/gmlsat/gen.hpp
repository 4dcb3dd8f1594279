#ifndef GMLSAT_GEN_HPP
#define GMLSAT_GEN_HPP

#include <cstdint>

#include "gmlsat/formula.hpp"

namespace gmlsat {

struct GenProfile {
  std::uint64_t max_size = 25;  // node budget
  std::uint64_t max_n = 4;      // largest modality bound
  int atoms = 3;
  int relations = 2;
  bool allow_inverse = false;
  bool allow_intersection = false;
  bool allow_legacy = false;
};

// Deterministic for a fixed seed and profile on every platform; the PRNG is
// SplitMix64 (Steele/Lea/Flood, fixed published constants).
Formula generate(std::uint64_t seed, const GenProfile& profile = {});

}  // namespace gmlsat

#endif
