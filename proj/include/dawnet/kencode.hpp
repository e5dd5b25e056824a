#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dawnet/dawnet.hpp"

namespace dawnet {

/// A term of the planning language: a constant symbol (lowercase or integer
/// literal) or a rule variable (capitalized).
struct KTerm {
  bool is_var = false;
  std::string text;

  static KTerm constant(std::string s) { return KTerm{false, std::move(s)}; }
  static KTerm variable(std::string s) { return KTerm{true, std::move(s)}; }

  auto operator<=>(const KTerm&) const = default;
};

struct KAtom {
  std::string pred;
  std::vector<KTerm> args;

  auto operator<=>(const KAtom&) const = default;
};

/// Fluent or action literal, possibly strongly negated (-p).
struct KLit {
  KAtom atom;
  bool neg = false;

  auto operator<=>(const KLit&) const = default;
};

/// Built-in comparison (== or !=) evaluated at grounding time.
struct KBuiltin {
  KTerm lhs;
  bool eq = true;
  KTerm rhs;

  auto operator<=>(const KBuiltin&) const = default;
};

/// caused h if post_pos, not post_neg, builtins after pre_pos, not pre_neg.
/// executable h if pre_pos, not pre_neg.  (head is an action atom)
struct KRule {
  enum class Kind { Causation, Executability } kind = Kind::Causation;
  std::optional<KLit> head;  // nullopt: false head (causation constraints)
  std::vector<KLit> post_pos, post_neg;  // "if" part
  std::vector<KLit> pre_pos, pre_neg;    // "after" part (actions and fluents)
  std::vector<KBuiltin> builtins;

  auto operator<=>(const KRule&) const = default;
};

/// Bijective mapping between net identifiers and planning symbols, plus the
/// guard-subformula table.
struct SymbolTable {
  std::map<PlaceId, std::string> place_fluent;
  std::map<TransitionId, std::string> action_name;
  std::map<VarId, std::string> var_base;  // base b: fluents var_b, var_def_b, var_change_b
  std::map<Value, std::string> value_const;
  std::vector<std::pair<std::string, GuardPtr>> guard_fluents;  // guard_k in numbering order

  std::map<std::string, PlaceId> fluent_place;      // inverse of place_fluent
  std::map<std::string, VarId> varfluent_var;       // var_b -> variable
  std::map<std::string, Value> const_value;         // inverse of value_const
  std::map<std::string, TransitionId> action_transition;

  std::string var_fluent(const VarId& v) const { return "var_" + var_base.at(v); }
  std::string var_def_fluent(const VarId& v) const { return "var_def_" + var_base.at(v); }
  std::string var_change_fluent(const VarId& v) const { return "var_change_" + var_base.at(v); }
  std::string vardom_pred(const VarId& v, const TransitionId& t) const {
    return "vardom_" + var_base.at(v) + "_" + action_name.at(t);
  }
};

struct PlanningDomain {
  std::vector<KAtom> background;                         // ground facts
  std::vector<std::pair<std::string, int>> fluent_decls;  // name, arity
  std::vector<std::pair<std::string, int>> action_decls;
  std::vector<KRule> rules;
  std::vector<KLit> initially;                 // ground literals
  std::vector<std::pair<KAtom, bool>> goal;    // atom, negated?
  SymbolTable symbols;
};

/// Compiles a DAW-net into the planning domain: place fluents, transition
/// actions, executability and pairwise concurrency disabling, token transfer
/// and inertia, variable functionality/inertia/update rules, and one defining
/// rule block per guard subformula. Write sets must be explicit
/// (IntervalNotExpanded otherwise).
PlanningDomain encode(const DawNet& w);

struct KText {
  std::string domain;   // contents of <model>.dom.k
  std::string problem;  // contents of <model>.prob.k
};

/// Deterministic one-statement-per-line text in the surface syntax
/// (`caused ... if ... after ... .`, `executable ... if ... .`,
/// `initially: ... .`, `goal: ... ?`). Injective on planning domains.
KText serialize(const PlanningDomain& pd);

/// Internal parser for the emitted format (round-trip tests). The symbol
/// table is not recoverable from text and is left empty.
PlanningDomain parse_k(const std::string& domain_text, const std::string& problem_text);

}  // namespace dawnet
