#include "gmlsat/formula.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cctype>
#include <sstream>

namespace gmlsat {

RelationExpr::RelationExpr(Rel r) : parts_{std::move(r)} {}

RelationExpr::RelationExpr(std::vector<Rel> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("empty relation intersection");
  std::sort(parts_.begin(), parts_.end());
  parts_.erase(std::unique(parts_.begin(), parts_.end()), parts_.end());
}

namespace {

Formula node(FKind k) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  return n;
}

Formula mk_modal(FKind k, RelationExpr rel, std::uint64_t n, Formula body) {
  auto f = std::make_shared<FormulaNode>();
  f->kind = k;
  f->rel_parts = rel.parts();
  f->bound = n;
  f->lhs = std::move(body);
  return f;
}

}  // namespace

Formula mk_atom(std::string name) {
  auto f = std::make_shared<FormulaNode>();
  f->kind = FKind::Atom;
  f->atom = std::move(name);
  return f;
}

Formula mk_not(Formula f) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::Not;
  n->lhs = std::move(f);
  return n;
}

Formula mk_and(Formula a, Formula b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::And;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

Formula mk_or(Formula a, Formula b) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FKind::Or;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

Formula mk_geq(RelationExpr rel, std::uint64_t n, Formula body) {
  return mk_modal(FKind::Geq, std::move(rel), n, std::move(body));
}

Formula mk_leq(RelationExpr rel, std::uint64_t n, Formula body) {
  return mk_modal(FKind::Leq, std::move(rel), n, std::move(body));
}

Formula mk_dia(std::string rel_name, std::uint64_t n, Formula body) {
  return mk_modal(FKind::Dia, RelationExpr{Rel{std::move(rel_name), false}}, n,
                  std::move(body));
}

Formula mk_box(std::string rel_name, std::uint64_t n, Formula body) {
  return mk_modal(FKind::Box, RelationExpr{Rel{std::move(rel_name), false}}, n,
                  std::move(body));
}

int compare(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case FKind::Atom:
      return a->atom.compare(b->atom);
    case FKind::Not:
      return compare(a->lhs, b->lhs);
    case FKind::And:
    case FKind::Or: {
      int c = compare(a->lhs, b->lhs);
      return c != 0 ? c : compare(a->rhs, b->rhs);
    }
    case FKind::Geq:
    case FKind::Leq:
    case FKind::Dia:
    case FKind::Box: {
      if (a->rel_parts != b->rel_parts)
        return a->rel_parts < b->rel_parts ? -1 : 1;
      if (a->bound != b->bound) return a->bound < b->bound ? -1 : 1;
      return compare(a->lhs, b->lhs);
    }
  }
  return 0;
}

bool equal(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

parse_error::parse_error(const std::string& msg, int line, int col)
    : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                         std::to_string(col)),
      line(line),
      col(col) {}

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  struct Token {
    enum Type { LParen, RParen, Symbol, End } type;
    std::string value;
    int line, col;
  };

  Token next() {
    skip_ws();
    if (pos >= text.size()) return {Token::End, "", line, col};
    int l = line, c = col;
    char ch = text[pos];
    if (ch == '(') {
      advance();
      return {Token::LParen, "(", l, c};
    }
    if (ch == ')') {
      advance();
      return {Token::RParen, ")", l, c};
    }
    std::string sym;
    while (pos < text.size()) {
      char s = text[pos];
      if (s == '(' || s == ')' || s == '#' ||
          std::isspace(static_cast<unsigned char>(s)))
        break;
      sym.push_back(s);
      advance();
    }
    return {Token::Symbol, sym, l, c};
  }
};

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

class Parser {
 public:
  Parser(std::string_view text, bool allow_reserved)
      : lex_{text}, allow_reserved_(allow_reserved) {
    tok_ = lex_.next();
  }

  Formula parse() {
    Formula f = formula();
    if (tok_.type != Lexer::Token::End)
      throw parse_error("trailing input after formula", tok_.line, tok_.col);
    return f;
  }

 private:
  Lexer lex_;
  Lexer::Token tok_;
  bool allow_reserved_;

  void consume() { tok_ = lex_.next(); }

  void expect_rparen() {
    if (tok_.type != Lexer::Token::RParen)
      throw parse_error("expected ')'", tok_.line, tok_.col);
    consume();
  }

  std::string identifier(const char* what) {
    if (tok_.type != Lexer::Token::Symbol || !valid_identifier(tok_.value))
      throw parse_error(std::string("expected ") + what, tok_.line, tok_.col);
    std::string s = tok_.value;
    consume();
    return s;
  }

  std::uint64_t natural() {
    if (tok_.type != Lexer::Token::Symbol || tok_.value.empty())
      throw parse_error("expected a number", tok_.line, tok_.col);
    std::uint64_t v = 0;
    for (char c : tok_.value) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw parse_error("expected a number", tok_.line, tok_.col);
      std::uint64_t d = static_cast<std::uint64_t>(c - '0');
      if (v > (UINT64_MAX - d) / 10)
        throw parse_error("number does not fit in 64 bits", tok_.line, tok_.col);
      v = v * 10 + d;
    }
    consume();
    return v;
  }

  // rel := rname | (inv rname) | (cap rel+); nested cap is flattened,
  // inverse-of-inverse cannot be written in the grammar.
  void rel_into(std::vector<Rel>& out) {
    if (tok_.type == Lexer::Token::Symbol) {
      out.push_back(Rel{identifier("a relation name"), false});
      return;
    }
    if (tok_.type != Lexer::Token::LParen)
      throw parse_error("expected a relation", tok_.line, tok_.col);
    consume();
    std::string kw = identifier("'inv' or 'cap'");
    if (kw == "inv") {
      out.push_back(Rel{identifier("a relation name"), true});
      expect_rparen();
    } else if (kw == "cap") {
      int count = 0;
      while (tok_.type != Lexer::Token::RParen) {
        rel_into(out);
        ++count;
      }
      if (count == 0)
        throw parse_error("'cap' needs at least one relation", tok_.line, tok_.col);
      consume();
    } else {
      throw parse_error("unknown relation operator '" + kw + "'", tok_.line,
                        tok_.col);
    }
  }

  RelationExpr relation() {
    std::vector<Rel> parts;
    rel_into(parts);
    return RelationExpr{std::move(parts)};
  }

  Formula formula() {
    if (tok_.type == Lexer::Token::Symbol) {
      int l = tok_.line, c = tok_.col;
      std::string name = identifier("an atom");
      if (!allow_reserved_ && name == kReservedFalseAtom)
        throw parse_error("atom '" + name + "' is reserved", l, c);
      return mk_atom(std::move(name));
    }
    if (tok_.type != Lexer::Token::LParen)
      throw parse_error("expected a formula", tok_.line, tok_.col);
    consume();
    int l = tok_.line, c = tok_.col;
    std::string kw = identifier("an operator");
    Formula result;
    if (kw == "not") {
      result = mk_not(formula());
    } else if (kw == "and" || kw == "or") {
      Formula a = formula();
      Formula b = formula();
      result = kw == "and" ? mk_and(a, b) : mk_or(a, b);
    } else if (kw == "ge" || kw == "le") {
      RelationExpr r = relation();
      std::uint64_t n = natural();
      Formula body = formula();
      result = kw == "ge" ? mk_geq(std::move(r), n, body)
                          : mk_leq(std::move(r), n, body);
    } else if (kw == "dia" || kw == "box") {
      std::string r = identifier("a relation name");
      std::uint64_t n = natural();
      Formula body = formula();
      result = kw == "dia" ? mk_dia(std::move(r), n, body)
                           : mk_box(std::move(r), n, body);
    } else {
      throw parse_error("unknown operator '" + kw + "'", l, c);
    }
    expect_rparen();
    return result;
  }
};

void print_rel(std::ostringstream& out, const std::vector<Rel>& parts) {
  auto one = [&](const Rel& r) {
    if (r.inverse)
      out << "(inv " << r.name << ")";
    else
      out << r.name;
  };
  if (parts.size() == 1) {
    one(parts.front());
    return;
  }
  out << "(cap";
  for (const Rel& r : parts) {
    out << ' ';
    one(r);
  }
  out << ')';
}

void print_into(std::ostringstream& out, const Formula& f) {
  switch (f->kind) {
    case FKind::Atom:
      out << f->atom;
      return;
    case FKind::Not:
      out << "(not ";
      print_into(out, f->lhs);
      out << ')';
      return;
    case FKind::And:
    case FKind::Or:
      out << (f->kind == FKind::And ? "(and " : "(or ");
      print_into(out, f->lhs);
      out << ' ';
      print_into(out, f->rhs);
      out << ')';
      return;
    case FKind::Geq:
    case FKind::Leq:
      out << (f->kind == FKind::Geq ? "(ge " : "(le ");
      print_rel(out, f->rel_parts);
      out << ' ' << f->bound << ' ';
      print_into(out, f->lhs);
      out << ')';
      return;
    case FKind::Dia:
    case FKind::Box:
      out << (f->kind == FKind::Dia ? "(dia " : "(box ");
      out << f->rel_parts.front().name << ' ' << f->bound << ' ';
      print_into(out, f->lhs);
      out << ')';
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text, bool allow_reserved) {
  return Parser(text, allow_reserved).parse();
}

std::string print_formula(const Formula& f) {
  std::ostringstream out;
  print_into(out, f);
  return out.str();
}

bool is_legacy_free(const Formula& f) {
  switch (f->kind) {
    case FKind::Dia:
    case FKind::Box:
      return false;
    case FKind::Atom:
      return true;
    case FKind::Not:
      return is_legacy_free(f->lhs);
    case FKind::And:
    case FKind::Or:
      return is_legacy_free(f->lhs) && is_legacy_free(f->rhs);
    case FKind::Geq:
    case FKind::Leq:
      return is_legacy_free(f->lhs);
  }
  return true;
}

bool is_nnf(const Formula& f) {
  switch (f->kind) {
    case FKind::Atom:
      return true;
    case FKind::Not:
      return f->lhs->kind == FKind::Atom;
    case FKind::And:
    case FKind::Or:
      return is_nnf(f->lhs) && is_nnf(f->rhs);
    case FKind::Geq:
    case FKind::Leq:
    case FKind::Dia:
    case FKind::Box:
      return is_nnf(f->lhs);
  }
  return true;
}

bool mentions_inverse_or_intersection(const Formula& f) {
  switch (f->kind) {
    case FKind::Atom:
      return false;
    case FKind::Not:
      return mentions_inverse_or_intersection(f->lhs);
    case FKind::And:
    case FKind::Or:
      return mentions_inverse_or_intersection(f->lhs) ||
             mentions_inverse_or_intersection(f->rhs);
    case FKind::Geq:
    case FKind::Leq:
    case FKind::Dia:
    case FKind::Box:
      if (f->rel_parts.size() > 1) return true;
      if (f->rel_parts.front().inverse) return true;
      return mentions_inverse_or_intersection(f->lhs);
  }
  return false;
}

bool mentions_atom(const Formula& f, std::string_view name) {
  switch (f->kind) {
    case FKind::Atom:
      return f->atom == name;
    case FKind::Not:
    case FKind::Geq:
    case FKind::Leq:
    case FKind::Dia:
    case FKind::Box:
      return mentions_atom(f->lhs, name);
    case FKind::And:
    case FKind::Or:
      return mentions_atom(f->lhs, name) || mentions_atom(f->rhs, name);
  }
  return false;
}

Formula modernize(const Formula& f) {
  switch (f->kind) {
    case FKind::Atom:
      return f;
    case FKind::Not:
      return mk_not(modernize(f->lhs));
    case FKind::And:
      return mk_and(modernize(f->lhs), modernize(f->rhs));
    case FKind::Or:
      return mk_or(modernize(f->lhs), modernize(f->rhs));
    case FKind::Geq:
      return mk_geq(f->rel(), f->bound, modernize(f->lhs));
    case FKind::Leq:
      return mk_leq(f->rel(), f->bound, modernize(f->lhs));
    case FKind::Dia:
      // <R>^n psi holds iff more than n successors satisfy psi.
      return mk_geq(f->rel(), f->bound + 1, modernize(f->lhs));
    case FKind::Box:
      // [R]^n psi holds iff at most n successors satisfy the negation.
      return mk_leq(f->rel(), f->bound, mk_not(modernize(f->lhs)));
  }
  return f;
}

namespace {

Formula reserved_false() {
  return mk_and(mk_atom(kReservedFalseAtom), mk_not(mk_atom(kReservedFalseAtom)));
}

Formula nnf(const Formula& f, bool negated) {
  switch (f->kind) {
    case FKind::Atom:
      return negated ? mk_not(f) : f;
    case FKind::Not:
      return nnf(f->lhs, !negated);
    case FKind::And: {
      Formula a = nnf(f->lhs, negated), b = nnf(f->rhs, negated);
      return negated ? mk_or(a, b) : mk_and(a, b);
    }
    case FKind::Or: {
      Formula a = nnf(f->lhs, negated), b = nnf(f->rhs, negated);
      return negated ? mk_and(a, b) : mk_or(a, b);
    }
    case FKind::Geq: {
      Formula body = nnf(f->lhs, false);
      if (!negated) return mk_geq(f->rel(), f->bound, body);
      if (f->bound == 0) return reserved_false();
      return mk_leq(f->rel(), f->bound - 1, body);
    }
    case FKind::Leq: {
      Formula body = nnf(f->lhs, false);
      if (!negated) return mk_leq(f->rel(), f->bound, body);
      return mk_geq(f->rel(), f->bound + 1, body);
    }
    case FKind::Dia:
    case FKind::Box:
      throw std::invalid_argument("to_nnf requires a legacy-free formula");
  }
  return f;
}

Formula nnf_legacy(const Formula& f, bool negated) {
  switch (f->kind) {
    case FKind::Atom:
      return negated ? mk_not(f) : f;
    case FKind::Not:
      return nnf_legacy(f->lhs, !negated);
    case FKind::And: {
      Formula a = nnf_legacy(f->lhs, negated), b = nnf_legacy(f->rhs, negated);
      return negated ? mk_or(a, b) : mk_and(a, b);
    }
    case FKind::Or: {
      Formula a = nnf_legacy(f->lhs, negated), b = nnf_legacy(f->rhs, negated);
      return negated ? mk_and(a, b) : mk_or(a, b);
    }
    case FKind::Dia: {
      Formula body = nnf_legacy(f->lhs, negated);
      if (!negated) return mk_dia(f->rel_parts.front().name, f->bound, body);
      return mk_box(f->rel_parts.front().name, f->bound, body);
    }
    case FKind::Box: {
      Formula body = nnf_legacy(f->lhs, negated);
      if (!negated) return mk_box(f->rel_parts.front().name, f->bound, body);
      return mk_dia(f->rel_parts.front().name, f->bound, body);
    }
    case FKind::Geq:
    case FKind::Leq:
      throw std::invalid_argument("to_nnf_legacy expects legacy modalities only");
  }
  return f;
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

Formula to_nnf_legacy(const Formula& f) { return nnf_legacy(f, false); }

Formula neg_nnf(const Formula& f) {
  switch (f->kind) {
    case FKind::Atom:
      return mk_not(f);
    case FKind::Not:
      return f->lhs;
    case FKind::And:
      return mk_or(neg_nnf(f->lhs), neg_nnf(f->rhs));
    case FKind::Or:
      return mk_and(neg_nnf(f->lhs), neg_nnf(f->rhs));
    case FKind::Geq:
      if (f->bound == 0) return reserved_false();
      return mk_leq(f->rel(), f->bound - 1, f->lhs);
    case FKind::Leq:
      return mk_geq(f->rel(), f->bound + 1, f->lhs);
    case FKind::Dia:
      return mk_box(f->rel_parts.front().name, f->bound, neg_nnf(f->lhs));
    case FKind::Box:
      return mk_dia(f->rel_parts.front().name, f->bound, neg_nnf(f->lhs));
  }
  return f;
}

FormulaSet clos(const Formula& f) {
  FormulaSet result;
  std::vector<Formula> work{f};
  while (!work.empty()) {
    Formula g = work.back();
    work.pop_back();
    if (!result.insert(g).second) continue;
    switch (g->kind) {
      case FKind::And:
      case FKind::Or:
        work.push_back(g->lhs);
        work.push_back(g->rhs);
        break;
      case FKind::Geq:
      case FKind::Leq:
        work.push_back(g->lhs);
        break;
      default:
        break;
    }
    work.push_back(neg_nnf(g));
  }
  return result;
}

namespace {

std::uint64_t bit_length(std::uint64_t n) {
  return n == 0 ? 1 : static_cast<std::uint64_t>(std::bit_width(n));
}

}  // namespace

FormulaMeasures measures(const Formula& f) {
  FormulaMeasures m;
  switch (f->kind) {
    case FKind::Atom:
      return {1, 0, 0};
    case FKind::Not: {
      FormulaMeasures s = measures(f->lhs);
      return {1 + s.size, s.modal_depth, s.norm};
    }
    case FKind::And:
    case FKind::Or: {
      FormulaMeasures a = measures(f->lhs), b = measures(f->rhs);
      return {1 + a.size + b.size, std::max(a.modal_depth, b.modal_depth),
              1 + a.norm + b.norm};
    }
    case FKind::Geq:
    case FKind::Leq:
    case FKind::Dia:
    case FKind::Box: {
      FormulaMeasures s = measures(f->lhs);
      return {1 + f->rel_parts.size() + bit_length(f->bound) + s.size,
              1 + s.modal_depth, 1 + s.norm};
    }
  }
  return m;
}

namespace {

template <typename Fn>
void visit(const Formula& f, Fn&& fn) {
  fn(f);
  switch (f->kind) {
    case FKind::Atom:
      break;
    case FKind::And:
    case FKind::Or:
      visit(f->lhs, fn);
      visit(f->rhs, fn);
      break;
    default:
      if (f->lhs) visit(f->lhs, fn);
      break;
  }
}

}  // namespace

std::vector<std::string> atom_names(const Formula& f) {
  std::set<std::string> names;
  visit(f, [&](const Formula& g) {
    if (g->kind == FKind::Atom) names.insert(g->atom);
  });
  return {names.begin(), names.end()};
}

std::vector<std::string> relation_names(const Formula& f) {
  std::set<std::string> names;
  visit(f, [&](const Formula& g) {
    for (const Rel& r : g->rel_parts) names.insert(r.name);
  });
  return {names.begin(), names.end()};
}

std::vector<RelationExpr> relation_exprs(const Formula& f) {
  std::set<RelationExpr> exprs;
  for (const Formula& g : clos(f)) {
    if (g->kind == FKind::Geq || g->kind == FKind::Leq || g->kind == FKind::Dia ||
        g->kind == FKind::Box)
      exprs.insert(g->rel());
  }
  return {exprs.begin(), exprs.end()};
}

}  // namespace gmlsat
