#include "gmlsat/kripke.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "gmlsat/csys.hpp"

namespace gmlsat {

int KripkeStructure::add_world() { return worlds_++; }

void KripkeStructure::check_world(int w) const {
  if (w < 0 || w >= worlds_)
    throw std::out_of_range("unknown world w" + std::to_string(w));
}

void KripkeStructure::add_edge(const std::string& rel, int from, int to) {
  check_world(from);
  check_world(to);
  relations_[rel].insert({from, to});
}

void KripkeStructure::set_atom(const std::string& atom, int world) {
  check_world(world);
  valuation_[atom].insert(world);
}

bool KripkeStructure::has_edge(const Rel& rel, int from, int to) const {
  auto it = relations_.find(rel.name);
  if (it == relations_.end()) return false;
  if (rel.inverse) std::swap(from, to);
  return it->second.count({from, to}) > 0;
}

bool KripkeStructure::holds_atom(const std::string& atom, int world) const {
  auto it = valuation_.find(atom);
  return it != valuation_.end() && it->second.count(world) > 0;
}

std::uint64_t succ_count(const KripkeStructure& m, int x, const RelationExpr& rel,
                         const Formula& f) {
  if (x < 0 || x >= m.worlds())
    throw std::out_of_range("unknown world w" + std::to_string(x));
  std::uint64_t count = 0;
  for (int y = 0; y < m.worlds(); ++y) {
    bool connected = true;
    for (const Rel& r : rel.parts()) {
      if (!m.has_edge(r, x, y)) {
        connected = false;
        break;
      }
    }
    if (connected && check(m, y, f)) ++count;
  }
  return count;
}

bool check(const KripkeStructure& m, int x, const Formula& f) {
  switch (f->kind) {
    case FKind::Atom:
      return m.holds_atom(f->atom, x);
    case FKind::Not:
      return !check(m, x, f->lhs);
    case FKind::And:
      return check(m, x, f->lhs) && check(m, x, f->rhs);
    case FKind::Or:
      return check(m, x, f->lhs) || check(m, x, f->rhs);
    case FKind::Geq:
      return succ_count(m, x, f->rel(), f->lhs) >= f->bound;
    case FKind::Leq:
      return succ_count(m, x, f->rel(), f->lhs) <= f->bound;
    case FKind::Dia:
    case FKind::Box:
      throw std::invalid_argument("check requires a legacy-free formula");
  }
  return false;
}

std::pair<KripkeStructure, std::map<int, int>> canonical_structure(
    const ConstraintSystem& s) {
  KripkeStructure m;
  std::map<int, int> world_of;
  for (int v : s.vars()) world_of[v] = m.add_world();
  for (int v : s.vars()) {
    for (const Formula& f : s.label(v))
      if (f->kind == FKind::Atom) m.set_atom(f->atom, world_of[v]);
    for (const auto& [rel, to] : s.out_edges(v))
      if (!rel.inverse) m.add_edge(rel.name, world_of[v], world_of.at(to));
  }
  return {std::move(m), std::move(world_of)};
}

EnumResult enumerate_models(const Formula& f, int max_worlds,
                            std::uint64_t max_structures) {
  std::vector<std::string> atoms = atom_names(f);
  std::vector<std::string> rels = relation_names(f);
  std::uint64_t examined = 0;
  for (int n = 1; n <= max_worlds; ++n) {
    std::uint64_t edge_bits = static_cast<std::uint64_t>(rels.size()) * n * n;
    std::uint64_t val_bits = static_cast<std::uint64_t>(atoms.size()) * n;
    std::uint64_t total_bits = edge_bits + val_bits;
    if (total_bits >= 63) return {EnumStatus::Inconclusive, KripkeStructure{}, 0};
    for (std::uint64_t bitmap = 0; bitmap < (1ull << total_bits); ++bitmap) {
      if (++examined > max_structures) return {EnumStatus::Inconclusive, KripkeStructure{}, 0};
      KripkeStructure m(n);
      std::uint64_t bit = 0;
      for (const std::string& r : rels)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j, ++bit)
            if (bitmap >> bit & 1) m.add_edge(r, i, j);
      for (const std::string& a : atoms)
        for (int w = 0; w < n; ++w, ++bit)
          if (bitmap >> bit & 1) m.set_atom(a, w);
      for (int x = 0; x < n; ++x)
        if (check(m, x, f)) return {EnumStatus::Found, std::move(m), x};
    }
  }
  return {EnumStatus::NoneFound, KripkeStructure{}, 0};
}

std::string model_to_text(const KripkeStructure& m, int root) {
  std::vector<std::string> world_lines, rel_lines, val_lines;
  for (int w = 0; w < m.worlds(); ++w)
    world_lines.push_back("world w" + std::to_string(w));
  for (const auto& [name, pairs] : m.relations())
    for (const auto& [from, to] : pairs)
      rel_lines.push_back("rel " + name + " w" + std::to_string(from) + " w" +
                          std::to_string(to));
  for (const auto& [atom, worlds] : m.valuation())
    for (int w : worlds)
      val_lines.push_back("val w" + std::to_string(w) + " " + atom);
  std::sort(world_lines.begin(), world_lines.end());
  std::sort(rel_lines.begin(), rel_lines.end());
  std::sort(val_lines.begin(), val_lines.end());
  std::ostringstream out;
  for (const auto& l : world_lines) out << l << '\n';
  for (const auto& l : rel_lines) out << l << '\n';
  for (const auto& l : val_lines) out << l << '\n';
  out << "root w" << root << '\n';
  return out.str();
}

namespace {

int parse_world_id(const std::string& tok) {
  if (tok.size() < 2 || tok[0] != 'w')
    throw std::invalid_argument("bad world id '" + tok + "'");
  return std::stoi(tok.substr(1));
}

}  // namespace

std::pair<KripkeStructure, int> model_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int world_count = 0;
  int root = -1;
  struct EdgeLine {
    std::string rel;
    int from, to;
  };
  std::vector<EdgeLine> edges;
  std::vector<std::pair<int, std::string>> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "world") {
      std::string id;
      ls >> id;
      world_count = std::max(world_count, parse_world_id(id) + 1);
    } else if (kw == "rel") {
      std::string name, a, b;
      ls >> name >> a >> b;
      edges.push_back({name, parse_world_id(a), parse_world_id(b)});
    } else if (kw == "val") {
      std::string id, atom;
      ls >> id >> atom;
      vals.push_back({parse_world_id(id), atom});
    } else if (kw == "root") {
      std::string id;
      ls >> id;
      root = parse_world_id(id);
    } else {
      throw std::invalid_argument("bad model line '" + line + "'");
    }
  }
  if (root < 0) throw std::invalid_argument("model text lacks a root line");
  KripkeStructure m(world_count);
  for (const auto& e : edges) m.add_edge(e.rel, e.from, e.to);
  for (const auto& [w, atom] : vals) m.set_atom(atom, w);
  return {std::move(m), root};
}

}  // namespace gmlsat
