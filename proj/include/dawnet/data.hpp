#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dawnet/error.hpp"

namespace dawnet {

using VarId = std::string;
using DomainId = std::string;

/// Tagged scalar: an integer (untagged) or a symbolic atom carrying its
/// domain tag. Atoms of different domains are distinct values even when
/// their names coincide.
struct Value {
  struct Atom {
    DomainId domain;
    std::string name;
    auto operator<=>(const Atom&) const = default;
  };
  std::variant<std::int64_t, Atom> v;

  static Value integer(std::int64_t i) { return Value{i}; }
  static Value atom(DomainId d, std::string n) { return Value{Atom{std::move(d), std::move(n)}}; }

  bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v); }
  const Atom& as_atom() const { return std::get<Atom>(v); }

  auto operator<=>(const Value&) const = default;
};

std::string to_string(const Value& v);

struct IntInterval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool contains(std::int64_t i) const { return lo <= i && i <= hi; }
  std::int64_t size() const { return hi - lo + 1; }
  auto operator<=>(const IntInterval&) const = default;
};

/// A value universe: an explicit finite set of values, or an integer interval.
struct Domain {
  DomainId id;
  std::variant<std::vector<Value>, IntInterval> universe;  // explicit values are sorted, unique
  // Order descriptor. Intervals with `ordered` use the built-in integer <=.
  // Explicit domains use `order_pairs` (stored reflexively and transitively
  // closed); `ordered` with an explicit universe means the chain order given
  // by the value listing. Absent order means ord(domain) is undefined.
  bool ordered = false;
  std::set<std::pair<Value, Value>> order_pairs;

  bool is_interval() const { return std::holds_alternative<IntInterval>(universe); }
  const IntInterval& interval() const { return std::get<IntInterval>(universe); }
  const std::vector<Value>& values() const { return std::get<std::vector<Value>>(universe); }

  bool contains(const Value& val) const;
  bool has_order() const { return ordered || !order_pairs.empty(); }
  /// leq under this domain's order; false when the order is undefined or
  /// either value is outside the universe.
  bool leq(const Value& a, const Value& b) const;
};

struct DataModel {
  std::map<DomainId, Domain> domains;
  std::map<VarId, DomainId> dm;  // total on variables

  bool has_var(const VarId& v) const { return dm.count(v) != 0; }
  const Domain& domain_of(const VarId& v) const;

  /// Checks dm totality/surjectivity and that each declared order is a
  /// partial order (reflexive, antisymmetric, transitive); throws on failure.
  void validate() const;
};

/// Partial map variable -> value.
using Assignment = std::map<VarId, Value>;

struct Term {
  enum class Kind { Var, Const } kind;
  VarId var;
  Value val;

  static Term variable(VarId v) { return Term{Kind::Var, std::move(v), {}}; }
  static Term constant(Value v) { return Term{Kind::Const, {}, std::move(v)}; }
  bool is_var() const { return kind == Kind::Var; }

  auto operator<=>(const Term&) const = default;
};

struct GuardExpr;
using GuardPtr = std::shared_ptr<const GuardExpr>;

/// AST of the guard language: true | def(v) | t1 = t2 | t1 <= t2 | !g | g && g.
struct GuardExpr {
  enum class Kind { True, Def, Eq, Leq, Not, And } kind;
  VarId var;        // Def
  Term lhs, rhs;    // Eq, Leq
  GuardPtr a, b;    // Not (a), And (a, b)

  static GuardPtr mk_true();
  static GuardPtr mk_def(VarId v);
  static GuardPtr mk_eq(Term l, Term r);
  static GuardPtr mk_leq(Term l, Term r);
  static GuardPtr mk_not(GuardPtr g);
  static GuardPtr mk_and(GuardPtr l, GuardPtr r);
};

bool guard_equal(const GuardExpr& x, const GuardExpr& y);
bool guard_equal(const GuardPtr& x, const GuardPtr& y);

/// Variables mentioned anywhere in the expression.
std::set<VarId> guard_vars(const GuardPtr& g);

/// Parses the concrete syntax `true | def(v) | t1 = t2 | t1 <= t2 | !g |
/// g && g` with parentheses; `>=`, `<`, `>` and `||` are accepted as sugar
/// and expanded through negation and conjunction. Bare identifiers resolve
/// to declared variables first, then to atoms of a unique declaring domain.
GuardPtr parse_guard(const std::string& text, const DataModel& dm);

/// The six semantic clauses of the query language. Total on well-formed input.
bool eval_guard(const GuardPtr& g, const DataModel& dm, const Assignment& eta);

/// Phi[eta]: replaces variable occurrences in term positions by their values.
/// def(v) is untouched (its semantics reads eta directly). Idempotent.
GuardPtr substitute(const GuardPtr& g, const Assignment& eta);

std::string pretty_print(const GuardPtr& g);

}  // namespace dawnet
