#include "gmlsat/gen.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace gmlsat {

namespace {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

class Generator {
 public:
  Generator(std::uint64_t seed, const GenProfile& p) : rng_(seed), p_(p) {}

  Formula gen(std::uint64_t budget) {
    if (budget < 3) return leaf();
    enum Pick { PAnd, POr, PNot, PGe, PLe, PDia, PBox };
    std::vector<Pick> picks{PAnd, POr, PNot, PGe, PLe};
    if (p_.allow_legacy) {
      picks.push_back(PDia);
      picks.push_back(PBox);
    }
    switch (picks[rng_.below(picks.size())]) {
      case PAnd: {
        auto [l, r] = split(budget - 1);
        Formula a = gen(l);
        return mk_and(std::move(a), gen(r));
      }
      case POr: {
        auto [l, r] = split(budget - 1);
        Formula a = gen(l);
        return mk_or(std::move(a), gen(r));
      }
      case PNot:
        return mk_not(gen(budget - 1));
      case PGe:
        return mk_geq(relation(), bound(), gen(budget - 2));
      case PLe:
        return mk_leq(relation(), bound(), gen(budget - 2));
      case PDia:
        return mk_dia(rel_name(), bound(), gen(budget - 2));
      case PBox:
        return mk_box(rel_name(), bound(), gen(budget - 2));
    }
    return leaf();
  }

 private:
  SplitMix64 rng_;
  const GenProfile& p_;

  Formula leaf() {
    std::string name = "p" + std::to_string(1 + rng_.below(p_.atoms));
    Formula a = mk_atom(std::move(name));
    return rng_.below(4) == 0 ? mk_not(std::move(a)) : a;
  }

  std::pair<std::uint64_t, std::uint64_t> split(std::uint64_t budget) {
    std::uint64_t left = 1 + rng_.below(std::max<std::uint64_t>(budget - 1, 1));
    return {left, budget - left};
  }

  std::uint64_t bound() { return rng_.below(p_.max_n + 1); }

  std::string rel_name() {
    return "r" + std::to_string(1 + rng_.below(p_.relations));
  }

  Rel atomic_rel() {
    bool inv = p_.allow_inverse && rng_.below(4) == 0;
    return Rel{rel_name(), inv};
  }

  RelationExpr relation() {
    if (p_.allow_intersection && rng_.below(4) == 0) {
      std::vector<Rel> parts{atomic_rel(), atomic_rel()};
      return RelationExpr{std::move(parts)};
    }
    return RelationExpr{atomic_rel()};
  }
};

}  // namespace

Formula generate(std::uint64_t seed, const GenProfile& profile) {
  Generator g(seed, profile);
  return g.gen(std::max<std::uint64_t>(profile.max_size, 1));
}

}  // namespace gmlsat
