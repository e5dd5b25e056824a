#include "dawnet/data.hpp"

#include <algorithm>

namespace dawnet {

std::string to_string(const Value& v) {
  if (v.is_int()) return std::to_string(v.as_int());
  return v.as_atom().name;
}

bool Domain::contains(const Value& val) const {
  if (is_interval()) return val.is_int() && interval().contains(val.as_int());
  const auto& vals = values();
  return std::binary_search(vals.begin(), vals.end(), val);
}

bool Domain::leq(const Value& a, const Value& b) const {
  if (!has_order() || !contains(a) || !contains(b)) return false;
  if (is_interval()) return a.as_int() <= b.as_int();
  if (ordered) {
    // Chain order by listed position; integers compare numerically.
    if (a.is_int() && b.is_int()) return a.as_int() <= b.as_int();
    const auto& vals = values();
    auto ia = std::find(vals.begin(), vals.end(), a);
    auto ib = std::find(vals.begin(), vals.end(), b);
    return ia <= ib;
  }
  return order_pairs.count({a, b}) != 0;
}

const Domain& DataModel::domain_of(const VarId& v) const {
  auto it = dm.find(v);
  if (it == dm.end()) throw DawError(ErrorCode::UnknownVariable, v);
  auto dit = domains.find(it->second);
  if (dit == domains.end()) throw DawError(ErrorCode::NotFound, "domain " + it->second);
  return dit->second;
}

void DataModel::validate() const {
  std::set<DomainId> used;
  for (const auto& [v, d] : dm) {
    if (!domains.count(d))
      throw DawError(ErrorCode::ValidationFailed, "variable " + v + " references unknown domain " + d);
    used.insert(d);
  }
  for (const auto& [id, dom] : domains) {
    if (!used.count(id))
      throw DawError(ErrorCode::ValidationFailed, "domain " + id + " is not used by any variable");
    if (!dom.is_interval()) {
      const auto& vals = dom.values();
      if (!std::is_sorted(vals.begin(), vals.end()) ||
          std::adjacent_find(vals.begin(), vals.end()) != vals.end())
        throw DawError(ErrorCode::ValidationFailed, "domain " + id + " values not sorted/unique");
      for (const auto& v : vals)
        if (!v.is_int() && v.as_atom().domain != id)
          throw DawError(ErrorCode::ValidationFailed, "atom in domain " + id + " carries foreign tag");
      if (!dom.order_pairs.empty()) {
        // Exhaustive partial-order check on the explicit universe.
        for (const auto& v : vals)
          if (!dom.order_pairs.count({v, v}))
            throw DawError(ErrorCode::ValidationFailed, "order on " + id + " is not reflexive");
        for (const auto& [a, b] : dom.order_pairs) {
          if (!dom.contains(a) || !dom.contains(b))
            throw DawError(ErrorCode::ValidationFailed, "order on " + id + " mentions foreign value");
          if (!(a == b) && dom.order_pairs.count({b, a}))
            throw DawError(ErrorCode::ValidationFailed, "order on " + id + " is not antisymmetric");
          for (const auto& [c, d] : dom.order_pairs)
            if (b == c && !dom.order_pairs.count({a, d}))
              throw DawError(ErrorCode::ValidationFailed, "order on " + id + " is not transitive");
        }
      }
    } else if (!dom.order_pairs.empty()) {
      throw DawError(ErrorCode::ValidationFailed, "interval domain " + id + " cannot carry explicit order pairs");
    }
  }
}

GuardPtr GuardExpr::mk_true() {
  return std::make_shared<GuardExpr>(GuardExpr{Kind::True, {}, {}, {}, nullptr, nullptr});
}
GuardPtr GuardExpr::mk_def(VarId v) {
  return std::make_shared<GuardExpr>(GuardExpr{Kind::Def, std::move(v), {}, {}, nullptr, nullptr});
}
GuardPtr GuardExpr::mk_eq(Term l, Term r) {
  return std::make_shared<GuardExpr>(GuardExpr{Kind::Eq, {}, std::move(l), std::move(r), nullptr, nullptr});
}
GuardPtr GuardExpr::mk_leq(Term l, Term r) {
  return std::make_shared<GuardExpr>(GuardExpr{Kind::Leq, {}, std::move(l), std::move(r), nullptr, nullptr});
}
GuardPtr GuardExpr::mk_not(GuardPtr g) {
  return std::make_shared<GuardExpr>(GuardExpr{Kind::Not, {}, {}, {}, std::move(g), nullptr});
}
GuardPtr GuardExpr::mk_and(GuardPtr l, GuardPtr r) {
  return std::make_shared<GuardExpr>(GuardExpr{Kind::And, {}, {}, {}, std::move(l), std::move(r)});
}

bool guard_equal(const GuardExpr& x, const GuardExpr& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case GuardExpr::Kind::True: return true;
    case GuardExpr::Kind::Def: return x.var == y.var;
    case GuardExpr::Kind::Eq:
    case GuardExpr::Kind::Leq: return x.lhs == y.lhs && x.rhs == y.rhs;
    case GuardExpr::Kind::Not: return guard_equal(x.a, y.a);
    case GuardExpr::Kind::And: return guard_equal(x.a, y.a) && guard_equal(x.b, y.b);
  }
  return false;
}

bool guard_equal(const GuardPtr& x, const GuardPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  return guard_equal(*x, *y);
}

static void collect_vars(const GuardPtr& g, std::set<VarId>& out) {
  if (!g) return;
  switch (g->kind) {
    case GuardExpr::Kind::True: break;
    case GuardExpr::Kind::Def: out.insert(g->var); break;
    case GuardExpr::Kind::Eq:
    case GuardExpr::Kind::Leq:
      if (g->lhs.is_var()) out.insert(g->lhs.var);
      if (g->rhs.is_var()) out.insert(g->rhs.var);
      break;
    case GuardExpr::Kind::Not: collect_vars(g->a, out); break;
    case GuardExpr::Kind::And:
      collect_vars(g->a, out);
      collect_vars(g->b, out);
      break;
  }
}

std::set<VarId> guard_vars(const GuardPtr& g) {
  std::set<VarId> out;
  collect_vars(g, out);
  return out;
}

namespace {

// Resolves a term after substitution to a ground value, if any.
std::optional<Value> ground_of(const Term& t, const Assignment& eta) {
  if (!t.is_var()) return t.val;
  auto it = eta.find(t.var);
  if (it == eta.end()) return std::nullopt;
  return it->second;
}

}  // namespace

bool eval_guard(const GuardPtr& g, const DataModel& dm, const Assignment& eta) {
  switch (g->kind) {
    case GuardExpr::Kind::True:
      return true;
    case GuardExpr::Kind::Def:
      return eta.count(g->var) != 0;
    case GuardExpr::Kind::Eq: {
      auto l = ground_of(g->lhs, eta);
      auto r = ground_of(g->rhs, eta);
      return l && r && *l == *r;
    }
    case GuardExpr::Kind::Leq: {
      auto l = ground_of(g->lhs, eta);
      auto r = ground_of(g->rhs, eta);
      if (!l || !r) return false;
      // True iff some domain with a defined order contains both and relates them.
      for (const auto& [id, dom] : dm.domains)
        if (dom.has_order() && dom.leq(*l, *r)) return true;
      return false;
    }
    case GuardExpr::Kind::Not:
      return !eval_guard(g->a, dm, eta);
    case GuardExpr::Kind::And:
      return eval_guard(g->a, dm, eta) && eval_guard(g->b, dm, eta);
  }
  return false;
}

GuardPtr substitute(const GuardPtr& g, const Assignment& eta) {
  auto subst_term = [&](const Term& t) {
    if (t.is_var()) {
      auto it = eta.find(t.var);
      if (it != eta.end()) return Term::constant(it->second);
    }
    return t;
  };
  switch (g->kind) {
    case GuardExpr::Kind::True:
    case GuardExpr::Kind::Def:
      return g;
    case GuardExpr::Kind::Eq:
      return GuardExpr::mk_eq(subst_term(g->lhs), subst_term(g->rhs));
    case GuardExpr::Kind::Leq:
      return GuardExpr::mk_leq(subst_term(g->lhs), subst_term(g->rhs));
    case GuardExpr::Kind::Not:
      return GuardExpr::mk_not(substitute(g->a, eta));
    case GuardExpr::Kind::And:
      return GuardExpr::mk_and(substitute(g->a, eta), substitute(g->b, eta));
  }
  return g;
}

namespace {

std::string term_text(const Term& t) {
  if (t.is_var()) return t.var;
  return to_string(t.val);
}

void print(const GuardPtr& g, std::string& out) {
  switch (g->kind) {
    case GuardExpr::Kind::True:
      out += "true";
      break;
    case GuardExpr::Kind::Def:
      out += "def(" + g->var + ")";
      break;
    case GuardExpr::Kind::Eq:
      out += term_text(g->lhs) + " = " + term_text(g->rhs);
      break;
    case GuardExpr::Kind::Leq:
      out += term_text(g->lhs) + " <= " + term_text(g->rhs);
      break;
    case GuardExpr::Kind::Not:
      out += "!(";
      print(g->a, out);
      out += ")";
      break;
    case GuardExpr::Kind::And:
      out += "(";
      print(g->a, out);
      out += ") && (";
      print(g->b, out);
      out += ")";
      break;
  }
}

}  // namespace

std::string pretty_print(const GuardPtr& g) {
  std::string out;
  print(g, out);
  return out;
}

// ---------------------------------------------------------------------------
// Concrete-syntax parser. Grammar (lowest to highest precedence):
//   or   := and ( "||" and )*
//   and  := unary ( "&&" unary )*
//   unary:= "!" unary | atom
//   atom := "true" | "def" "(" ident ")" | "(" or ")" | term cmp term
//   cmp  := "=" | "==" | "<=" | ">=" | "<" | ">"
//   term := ident | integer
// Sugar: a >= b -> b <= a;  a < b -> !(b <= a);  a > b -> !(a <= b);
//        p || q -> !(!p && !q).

namespace {

struct Token {
  enum class Kind { Ident, Int, Sym, End } kind;
  std::string text;
  std::int64_t value = 0;
  std::size_t pos = 0;
};

class Lexer {
public:
  Lexer(const std::string& s) : s_(s) { advance(); }
  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= s_.size()) {
      tok_ = {Token::Kind::End, "", 0, i_};
      return;
    }
    char c = s_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '.'))
        ++j;
      tok_ = {Token::Kind::Ident, s_.substr(i_, j - i_), 0, i_};
      i_ = j;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
      std::size_t j = i_ + 1;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      tok_ = {Token::Kind::Int, s_.substr(i_, j - i_), std::stoll(s_.substr(i_, j - i_)), i_};
      i_ = j;
      return;
    }
    static const char* two[] = {"&&", "||", "<=", ">=", "=="};
    for (const char* op : two) {
      if (s_.compare(i_, 2, op) == 0) {
        tok_ = {Token::Kind::Sym, op, 0, i_};
        i_ += 2;
        return;
      }
    }
    if (std::string("()!=<>").find(c) != std::string::npos) {
      tok_ = {Token::Kind::Sym, std::string(1, c), 0, i_};
      ++i_;
      return;
    }
    throw DawError(ErrorCode::SyntaxError,
                   "unexpected character '" + std::string(1, c) + "' at position " + std::to_string(i_));
  }

  const std::string& s_;
  std::size_t i_ = 0;
  Token tok_;
};

class GuardParser {
public:
  GuardParser(const std::string& text, const DataModel& dm) : lex_(text), dm_(dm) {}

  GuardPtr parse() {
    GuardPtr g = parse_or();
    if (lex_.peek().kind != Token::Kind::End)
      throw DawError(ErrorCode::SyntaxError,
                     "trailing input at position " + std::to_string(lex_.peek().pos));
    return g;
  }

private:
  [[noreturn]] void fail(const Token& t, const std::string& what) {
    throw DawError(ErrorCode::SyntaxError, what + " at position " + std::to_string(t.pos));
  }

  bool at_sym(const std::string& s) {
    return lex_.peek().kind == Token::Kind::Sym && lex_.peek().text == s;
  }

  void expect_sym(const std::string& s) {
    if (!at_sym(s)) fail(lex_.peek(), "expected '" + s + "'");
    lex_.next();
  }

  GuardPtr parse_or() {
    GuardPtr g = parse_and();
    while (at_sym("||")) {
      lex_.next();
      GuardPtr r = parse_and();
      g = GuardExpr::mk_not(
          GuardExpr::mk_and(GuardExpr::mk_not(g), GuardExpr::mk_not(r)));
    }
    return g;
  }

  GuardPtr parse_and() {
    GuardPtr g = parse_unary();
    while (at_sym("&&")) {
      lex_.next();
      g = GuardExpr::mk_and(g, parse_unary());
    }
    return g;
  }

  GuardPtr parse_unary() {
    if (at_sym("!")) {
      lex_.next();
      return GuardExpr::mk_not(parse_unary());
    }
    return parse_atom();
  }

  GuardPtr parse_atom() {
    Token t = lex_.peek();
    if (at_sym("(")) {
      lex_.next();
      GuardPtr g = parse_or();
      expect_sym(")");
      return g;
    }
    if (t.kind == Token::Kind::Ident && t.text == "true") {
      lex_.next();
      return GuardExpr::mk_true();
    }
    if (t.kind == Token::Kind::Ident && t.text == "def") {
      lex_.next();
      expect_sym("(");
      Token v = lex_.next();
      if (v.kind != Token::Kind::Ident) fail(v, "expected variable");
      if (!dm_.has_var(v.text))
        throw DawError(ErrorCode::UnknownVariable, v.text + " at position " + std::to_string(v.pos));
      expect_sym(")");
      return GuardExpr::mk_def(v.text);
    }
    Term lhs = parse_term();
    Token op = lex_.next();
    if (op.kind != Token::Kind::Sym) fail(op, "expected comparison operator");
    Term rhs = parse_term();
    if (op.text == "=" || op.text == "==") return GuardExpr::mk_eq(lhs, rhs);
    if (op.text == "<=") return GuardExpr::mk_leq(lhs, rhs);
    if (op.text == ">=") return GuardExpr::mk_leq(rhs, lhs);
    if (op.text == "<") return GuardExpr::mk_not(GuardExpr::mk_leq(rhs, lhs));
    if (op.text == ">") return GuardExpr::mk_not(GuardExpr::mk_leq(lhs, rhs));
    fail(op, "unknown operator '" + op.text + "'");
  }

  Term parse_term() {
    Token t = lex_.next();
    if (t.kind == Token::Kind::Int) return Term::constant(Value::integer(t.value));
    if (t.kind != Token::Kind::Ident) fail(t, "expected term");
    if (dm_.has_var(t.text)) return Term::variable(t.text);
    // Not a variable: resolve as an atom of a unique declaring domain.
    std::vector<DomainId> owners;
    for (const auto& [id, dom] : dm_.domains) {
      if (dom.is_interval()) continue;
      for (const auto& v : dom.values())
        if (!v.is_int() && v.as_atom().name == t.text) {
          owners.push_back(id);
          break;
        }
    }
    if (owners.empty())
      throw DawError(ErrorCode::UnknownVariable,
                     "unknown identifier '" + t.text + "' at position " + std::to_string(t.pos));
    if (owners.size() > 1)
      throw DawError(ErrorCode::SyntaxError, "atom '" + t.text + "' is ambiguous across domains");
    return Term::constant(Value::atom(owners.front(), t.text));
  }

  Lexer lex_;
  const DataModel& dm_;
};

}  // namespace

GuardPtr parse_guard(const std::string& text, const DataModel& dm) {
  return GuardParser(text, dm).parse();
}

}  // namespace dawnet
