#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dawnet/kencode.hpp"

namespace dawnet {

/// Consistent set of ground fluent literals, interned as sorted ids
/// (literal = atom * 2 + negated).
struct PlanState {
  std::vector<int> lits;  // sorted, unique

  bool contains(int lit) const;
  bool operator==(const PlanState&) const = default;
  auto operator<=>(const PlanState&) const = default;
};

struct StateTransition {
  PlanState from;
  std::vector<int> actions;  // sorted action atom ids
  PlanState to;
};

struct GroundRule {
  bool is_exec = false;
  int head = -1;                            // literal id; -1 = false
  std::vector<int> post_pos, post_neg;      // "if" literal ids
  std::vector<int> pre_pos_fl, pre_neg_fl;  // "after" fluent literal ids
  std::vector<int> pre_pos_act;             // "after" action atom ids
  bool is_static() const {
    return !is_exec && pre_pos_fl.empty() && pre_neg_fl.empty() && pre_pos_act.empty();
  }
};

struct GroundProgram {
  std::vector<std::string> atom_names;       // id -> canonical text
  std::map<std::string, int> atom_ids;
  std::set<int> action_atoms;
  std::vector<GroundRule> rules;             // causation rules (facts included, empty body)
  std::vector<GroundRule> execs;             // executability conditions
  std::vector<int> fact_atoms;               // background facts
  std::vector<int> init_lits;                // literal ids from "initially"
  std::vector<std::pair<int, bool>> goal;    // atom id, negated?
  SymbolTable symbols;

  static int lit(int atom, bool neg) { return atom * 2 + (neg ? 1 : 0); }
  static int atom_of(int lit) { return lit / 2; }
  static bool neg_of(int lit) { return lit % 2 != 0; }
  int complement(int l) const { return lit(atom_of(l), !neg_of(l)); }
  const std::string& name(int atom) const { return atom_names[atom]; }
  std::string lit_name(int l) const { return (neg_of(l) ? "-" : "") + name(atom_of(l)); }
};

/// Instantiates every rule over the constants of the background facts and
/// rule text; built-in comparisons are evaluated away and positive background
/// literals prune instances that can never hold. Throws UnboundedVariable for
/// unsafe rules.
GroundProgram ground(const PlanningDomain& pd);

/// The least set closed under the static and initially rules (stratified
/// evaluation). Unique for the encoder's output. Throws ContradictionInInit.
std::vector<PlanState> legal_initial_states(const GroundProgram& gp);

/// Gelfond-Lifschitz style reduction: drops rules whose default-negated "if"
/// part meets t.to or whose default-negated "after" part meets t.from, and
/// strips the remaining default negation.
GroundProgram reduct(const GroundProgram& gp, const StateTransition& t);

/// Answer-set legality: the actions form an executable set w.r.t. t.from and
/// t.to is the minimal consistent set satisfying all reduct rules.
bool is_legal_transition(const GroundProgram& gp, const StateTransition& t);

/// All (singleton action, successor state) pairs legal from s: candidates are
/// generated fragment-specifically (per-variable choice over vardom values,
/// then deterministic closure) and verified with is_legal_transition.
std::vector<std::pair<int, PlanState>> successors(const GroundProgram& gp, const PlanState& s);

/// Lambda mapping: marking from positive place fluents, assignment from
/// var fluents. Throws InconsistentState.
NetState lambda(const GroundProgram& gp, const PlanState& s);

bool goal_satisfied(const GroundProgram& gp, const PlanState& s);

struct EquivalenceReport {
  bool equivalent = true;
  std::string counterexample;     // first divergence, empty when equivalent
  std::uint64_t paired_states = 0;
  std::uint64_t firings_checked = 0;
  std::uint64_t guard_checks = 0;
  std::uint64_t guard_mismatches = 0;

  bool ok() const { return equivalent && guard_mismatches == 0; }
};

/// Checks both directions of the case/trajectory correspondence up to
/// `depth`: from the initial states, firings and legal transitions must match
/// one-to-one under lambda, state by state. Also verifies, at every visited
/// planning state, that each guard fluent agrees with the guard's evaluation
/// under lambda. Requires explicit write sets and a control-flow 1-safe net.
EquivalenceReport check_equivalence(const DawNet& w, std::uint32_t depth);

/// Same, against a caller-supplied (possibly mutated) planning domain.
EquivalenceReport check_equivalence_with(const DawNet& w, const PlanningDomain& pd,
                                         std::uint32_t depth);

}  // namespace dawnet
