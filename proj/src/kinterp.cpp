#include "dawnet/kinterp.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace dawnet {

bool PlanState::contains(int lit) const {
  return std::binary_search(lits.begin(), lits.end(), lit);
}

namespace {

void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

bool subset(const std::vector<int>& sub, const PlanState& s) {
  for (int l : sub)
    if (!s.contains(l)) return false;
  return true;
}

bool intersects(const std::vector<int>& v, const PlanState& s) {
  for (int l : v)
    if (s.contains(l)) return true;
  return false;
}

bool consistent(const PlanState& s) {
  for (int l : s.lits)
    if (GroundProgram::neg_of(l) &&
        std::binary_search(s.lits.begin(), s.lits.end(), l - 1))
      return false;
  return true;
}

// Subset test where positive background facts count as satisfied (they are
// derived by the closure after the frame pass runs).
bool subset_modulo_facts(const std::vector<int>& sub, const PlanState& s,
                         const std::set<int>& facts) {
  for (int l : sub) {
    if (!GroundProgram::neg_of(l) && facts.count(GroundProgram::atom_of(l))) continue;
    if (!s.contains(l)) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grounding.

namespace {

class Grounder {
public:
  explicit Grounder(const PlanningDomain& pd) : pd_(pd) {}

  GroundProgram run() {
    gp_.symbols = pd_.symbols;
    collect_constants();
    for (const auto& f : pd_.background) {
      int id = intern(ground_atom_text(f, {}));
      background_preds_.insert(f.pred);
      fact_tuples_[f.pred].insert(args_of(f, {}));
      gp_.fact_atoms.push_back(id);
      GroundRule fact;
      fact.head = GroundProgram::lit(id, false);
      gp_.rules.push_back(std::move(fact));
    }
    for (const auto& [name, arity] : pd_.action_decls)
      if (arity == 0) gp_.action_atoms.insert(intern(name));
    for (const auto& r : pd_.rules) ground_rule(r);
    for (const auto& l : pd_.initially)
      gp_.init_lits.push_back(GroundProgram::lit(intern(ground_atom_text(l.atom, {})), l.neg));
    for (const auto& [atom, negd] : pd_.goal)
      gp_.goal.emplace_back(intern(ground_atom_text(atom, {})), negd);
    return std::move(gp_);
  }

private:
  using Binding = std::map<std::string, std::string>;

  void collect_constants() {
    auto from_atom = [&](const KAtom& a) {
      for (const auto& t : a.args)
        if (!t.is_var) herbrand_.insert(t.text);
    };
    for (const auto& f : pd_.background) from_atom(f);
    for (const auto& r : pd_.rules) {
      if (r.head) from_atom(r.head->atom);
      for (const auto& l : r.post_pos) from_atom(l.atom);
      for (const auto& l : r.post_neg) from_atom(l.atom);
      for (const auto& l : r.pre_pos) from_atom(l.atom);
      for (const auto& l : r.pre_neg) from_atom(l.atom);
      for (const auto& b : r.builtins) {
        if (!b.lhs.is_var) herbrand_.insert(b.lhs.text);
        if (!b.rhs.is_var) herbrand_.insert(b.rhs.text);
      }
    }
    for (const auto& l : pd_.initially) from_atom(l.atom);
  }

  int intern(const std::string& text) {
    auto it = gp_.atom_ids.find(text);
    if (it != gp_.atom_ids.end()) return it->second;
    int id = static_cast<int>(gp_.atom_names.size());
    gp_.atom_names.push_back(text);
    gp_.atom_ids.emplace(text, id);
    return id;
  }

  static std::vector<std::string> args_of(const KAtom& a, const Binding& b) {
    std::vector<std::string> out;
    for (const auto& t : a.args) out.push_back(t.is_var ? b.at(t.text) : t.text);
    return out;
  }

  static std::string ground_atom_text(const KAtom& a, const Binding& b) {
    std::string s = a.pred;
    if (!a.args.empty()) {
      s += "(";
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        const auto& t = a.args[i];
        if (i) s += ",";
        if (t.is_var) {
          auto it = b.find(t.text);
          if (it == b.end()) throw DawError(ErrorCode::UnboundedVariable, t.text + " in " + a.pred);
          s += it->second;
        } else {
          s += t.text;
        }
      }
      s += ")";
    }
    return s;
  }

  // Candidate values for each variable of the rule.
  std::map<std::string, std::set<std::string>> variable_candidates(const KRule& r) {
    std::map<std::string, std::set<std::string>> cand;
    std::set<std::string> vars;
    auto scan_atom = [&](const KAtom& a) {
      for (const auto& t : a.args)
        if (t.is_var) vars.insert(t.text);
    };
    if (r.head) scan_atom(r.head->atom);
    for (const auto& l : r.post_pos) scan_atom(l.atom);
    for (const auto& l : r.post_neg) scan_atom(l.atom);
    for (const auto& l : r.pre_pos) scan_atom(l.atom);
    for (const auto& l : r.pre_neg) scan_atom(l.atom);
    for (const auto& b : r.builtins) {
      if (b.lhs.is_var) vars.insert(b.lhs.text);
      if (b.rhs.is_var) vars.insert(b.rhs.text);
    }

    for (const auto& v : vars) {
      std::optional<std::set<std::string>> values;
      // Equality builtin against a constant binds exactly.
      for (const auto& b : r.builtins) {
        if (!b.eq) continue;
        if (b.lhs.is_var && b.lhs.text == v && !b.rhs.is_var) values = {{b.rhs.text}};
        if (b.rhs.is_var && b.rhs.text == v && !b.lhs.is_var) values = {{b.lhs.text}};
      }
      // Positive background literal narrows to the fact column.
      if (!values) {
        auto scan_positive = [&](const std::vector<KLit>& lits) {
          for (const auto& l : lits) {
            if (l.neg || !background_preds_.count(l.atom.pred)) continue;
            for (std::size_t i = 0; i < l.atom.args.size(); ++i) {
              if (!l.atom.args[i].is_var || l.atom.args[i].text != v) continue;
              std::set<std::string> col;
              for (const auto& tuple : fact_tuples_[l.atom.pred]) col.insert(tuple[i]);
              if (!values)
                values = col;
              else {
                std::set<std::string> inter;
                std::set_intersection(values->begin(), values->end(), col.begin(), col.end(),
                                      std::inserter(inter, inter.begin()));
                values = inter;
              }
            }
          }
        };
        scan_positive(r.post_pos);
        scan_positive(r.pre_pos);
      }
      // Positive fluent literal falls back to the Herbrand universe.
      if (!values) {
        bool in_positive = false;
        auto scan_any = [&](const std::vector<KLit>& lits) {
          for (const auto& l : lits)
            for (const auto& t : l.atom.args)
              if (t.is_var && t.text == v) in_positive = true;
        };
        scan_any(r.post_pos);
        scan_any(r.pre_pos);
        if (!in_positive)
          throw DawError(ErrorCode::UnboundedVariable,
                         "variable " + v + " not bounded by any positive body literal");
        values = herbrand_;
      }
      cand[v] = *values;
    }
    return cand;
  }

  void ground_rule(const KRule& r) {
    auto cand = variable_candidates(r);
    std::vector<std::string> vars;
    for (const auto& [v, vals] : cand) vars.push_back(v);

    Binding binding;
    std::function<void(std::size_t)> expand = [&](std::size_t i) {
      if (i == vars.size()) {
        emit_instance(r, binding);
        return;
      }
      for (const auto& val : cand[vars[i]]) {
        binding[vars[i]] = val;
        expand(i + 1);
      }
      binding.erase(vars[i]);
    };
    expand(0);
  }

  void emit_instance(const KRule& r, const Binding& b) {
    for (const auto& bi : r.builtins) {
      std::string l = bi.lhs.is_var ? b.at(bi.lhs.text) : bi.lhs.text;
      std::string rr = bi.rhs.is_var ? b.at(bi.rhs.text) : bi.rhs.text;
      if ((l == rr) != bi.eq) return;
    }
    GroundRule g;
    g.is_exec = r.kind == KRule::Kind::Executability;
    if (r.head) {
      g.head = GroundProgram::lit(intern(ground_atom_text(r.head->atom, b)), r.head->neg);
    }
    auto push = [&](const std::vector<KLit>& from, bool is_pre, bool negated, GroundRule& out) {
      for (const auto& l : from) {
        if (l.atom.pred == "true" && l.atom.args.empty()) {
          if (negated) return false;  // `not true` never holds
          continue;                   // `true` always holds
        }
        // Positive background literals prune instances; they stay in the
        // body (facts hold in every state).
        if (!negated && !l.neg && background_preds_.count(l.atom.pred)) {
          if (!fact_tuples_[l.atom.pred].count(args_of(l.atom, b))) return false;
        }
        int lit = GroundProgram::lit(intern(ground_atom_text(l.atom, b)), l.neg);
        bool is_action = gp_.action_atoms.count(GroundProgram::atom_of(lit)) != 0;
        if (is_pre && is_action && !negated)
          out.pre_pos_act.push_back(GroundProgram::atom_of(lit));
        else if (is_pre)
          (negated ? out.pre_neg_fl : out.pre_pos_fl).push_back(lit);
        else
          (negated ? out.post_neg : out.post_pos).push_back(lit);
      }
      return true;
    };
    if (g.is_exec) {
      // Executability bodies are preconditions on the old state.
      if (!push(r.post_pos, true, false, g)) return;
      if (!push(r.post_neg, true, true, g)) return;
      gp_.execs.push_back(std::move(g));
      return;
    }
    if (!push(r.post_pos, false, false, g)) return;
    if (!push(r.post_neg, false, true, g)) return;
    if (!push(r.pre_pos, true, false, g)) return;
    if (!push(r.pre_neg, true, true, g)) return;
    gp_.rules.push_back(std::move(g));
  }

  const PlanningDomain& pd_;
  GroundProgram gp_;
  std::set<std::string> herbrand_;
  std::set<std::string> background_preds_;
  std::map<std::string, std::set<std::vector<std::string>>> fact_tuples_;
};

}  // namespace

GroundProgram ground(const PlanningDomain& pd) { return Grounder(pd).run(); }

// ---------------------------------------------------------------------------
// Stratified evaluation of static rules (used for the initial state and for
// closing successor candidates).

namespace {

// Computes the least set closed under the given rules, where default
// negation must be stratified. `seed_lits` are taken as given (dynamic
// effects or initially literals). Returns nullopt if a false-head rule fires.
std::optional<PlanState> stratified_closure(const GroundProgram&,
                                            const std::vector<const GroundRule*>& rules,
                                            const std::vector<int>& seed_lits) {
  // Strata by negative dependency depth; the emitted static rules are
  // acyclic through negation (guard fluents follow the guard AST).
  // depth(lit) = 1 + max over rules with head lit of max(depth(post_pos),
  // 1 + depth(post_neg)). Computed by fixpoint; a negative cycle would not
  // terminate, so we cap and throw.
  std::map<int, std::vector<const GroundRule*>> by_head;
  for (const GroundRule* r : rules)
    if (r->head >= 0) by_head[r->head].push_back(r);

  std::map<int, int> depth;
  std::function<int(int, int)> depth_of = [&](int lit, int guard) -> int {
    auto it = depth.find(lit);
    if (it != depth.end()) return it->second;
    if (guard > 10000)
      throw DawError(ErrorCode::ContradictionInInit, "static rules are not stratified");
    depth[lit] = 0;  // provisional, breaks positive cycles
    int d = 0;
    auto hit = by_head.find(lit);
    if (hit != by_head.end()) {
      for (const GroundRule* r : hit->second) {
        for (int l : r->post_pos) d = std::max(d, depth_of(l, guard + 1));
        for (int l : r->post_neg) d = std::max(d, 1 + depth_of(l, guard + 1));
      }
    }
    depth[lit] = d;
    return d;
  };
  int max_depth = 0;
  for (const GroundRule* r : rules) {
    if (r->head >= 0) max_depth = std::max(max_depth, depth_of(r->head, 0));
    for (int l : r->post_neg) max_depth = std::max(max_depth, depth_of(l, 0));
    for (int l : r->post_pos) max_depth = std::max(max_depth, depth_of(l, 0));
  }

  PlanState state;
  state.lits = seed_lits;
  std::sort(state.lits.begin(), state.lits.end());
  state.lits.erase(std::unique(state.lits.begin(), state.lits.end()), state.lits.end());

  for (int stratum = 0; stratum <= max_depth; ++stratum) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const GroundRule* r : rules) {
        if (r->head >= 0 && depth_of(r->head, 0) != stratum) continue;
        if (!subset(r->post_pos, state)) continue;
        // Negated atoms live in lower strata: their truth is final.
        if (intersects(r->post_neg, state)) continue;
        if (r->head < 0) continue;  // constraints are evaluated once at the end
        if (!state.contains(r->head)) {
          insert_sorted(state.lits, r->head);
          changed = true;
        }
      }
    }
  }
  // Constraints (false heads) once everything is derived.
  for (const GroundRule* r : rules) {
    if (r->head >= 0) continue;
    if (subset(r->post_pos, state) && !intersects(r->post_neg, state)) return std::nullopt;
  }
  return state;
}

std::vector<const GroundRule*> static_rules(const GroundProgram& gp) {
  std::vector<const GroundRule*> out;
  for (const auto& r : gp.rules)
    if (r.is_static()) out.push_back(&r);
  return out;
}

}  // namespace

std::vector<PlanState> legal_initial_states(const GroundProgram& gp) {
  auto statics = static_rules(gp);
  auto s0 = stratified_closure(gp, statics, gp.init_lits);
  if (!s0) throw DawError(ErrorCode::ContradictionInInit, "a static constraint fires initially");
  if (!consistent(*s0))
    throw DawError(ErrorCode::ContradictionInInit, "initial state is inconsistent");
  return {*s0};
}

GroundProgram reduct(const GroundProgram& gp, const StateTransition& t) {
  GroundProgram out = gp;
  out.rules.clear();
  for (const auto& r : gp.rules) {
    if (intersects(r.post_neg, t.to)) continue;
    if (intersects(r.pre_neg_fl, t.from)) continue;
    GroundRule g = r;
    g.post_neg.clear();
    g.pre_neg_fl.clear();
    out.rules.push_back(std::move(g));
  }
  out.execs.clear();
  for (const auto& e : gp.execs) {
    if (intersects(e.pre_neg_fl, t.from)) continue;
    GroundRule g = e;
    g.pre_neg_fl.clear();
    out.execs.push_back(std::move(g));
  }
  return out;
}

namespace {

bool executable_set(const GroundProgram& gp, const PlanState& s, const std::vector<int>& actions) {
  for (int a : actions) {
    if (!gp.action_atoms.count(a)) return false;
    bool ok = false;
    for (const auto& e : gp.execs) {
      if (GroundProgram::atom_of(e.head) != a) continue;
      if (intersects(e.pre_neg_fl, s)) continue;  // reduct w.r.t. (s, A, {})
      if (!subset(e.pre_pos_fl, s)) continue;
      bool acts_ok = true;
      for (int act : e.pre_pos_act)
        if (!std::binary_search(actions.begin(), actions.end(), act)) acts_ok = false;
      if (!acts_ok) continue;
      ok = true;
      break;
    }
    if (!ok) return false;
  }
  return true;
}

// Rule applicability of the "after" part w.r.t. (s, A). Default-negated
// "after" literals are checked against s per the reduct definition.
bool pre_applicable(const GroundRule& r, const PlanState& s, const std::vector<int>& actions) {
  if (!subset(r.pre_pos_fl, s)) return false;
  if (intersects(r.pre_neg_fl, s)) return false;
  for (int a : r.pre_pos_act)
    if (!std::binary_search(actions.begin(), actions.end(), a)) return false;
  return true;
}

}  // namespace

bool is_legal_transition(const GroundProgram& gp, const StateTransition& t) {
  if (!consistent(t.from) || !consistent(t.to)) return false;
  if (!executable_set(gp, t.from, t.actions)) return false;

  // Least model of the reduced positive program; heads accumulate, and the
  // candidate t.to must coincide with it.
  PlanState fired;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : gp.rules) {
      if (r.is_exec) continue;
      if (intersects(r.post_neg, t.to)) continue;  // reduct
      if (!pre_applicable(r, t.from, t.actions)) continue;
      if (r.head < 0) continue;  // constraints checked against t.to below
      if (!subset(r.post_pos, fired)) continue;
      if (!fired.contains(r.head)) {
        insert_sorted(fired.lits, r.head);
        changed = true;
      }
    }
  }
  if (!(fired == t.to)) return false;
  // Constraints: a false head must not have its body satisfied in t.to.
  for (const auto& r : gp.rules) {
    if (r.is_exec || r.head >= 0) continue;
    if (intersects(r.post_neg, t.to)) continue;
    if (!pre_applicable(r, t.from, t.actions)) continue;
    if (subset(r.post_pos, t.to)) return false;
  }
  return true;
}

std::vector<std::pair<int, PlanState>> successors(const GroundProgram& gp, const PlanState& s) {
  std::vector<std::pair<int, PlanState>> out;
  std::set<int> fact_set(gp.fact_atoms.begin(), gp.fact_atoms.end());
  auto statics = static_rules(gp);

  for (int a : gp.action_atoms) {
    std::vector<int> actions{a};
    if (!executable_set(gp, s, actions)) continue;

    // Applicable dynamic rules for this action.
    std::vector<const GroundRule*> effects;              // empty "if" part, head literal
    std::map<std::string, std::vector<int>> choices;     // var fluent pred -> value literals
    std::vector<const GroundRule*> frame;                // head rules with s'-negations
    bool blocked = false;
    for (const auto& r : gp.rules) {
      if (r.is_exec || r.is_static()) continue;
      if (!pre_applicable(r, s, actions)) continue;
      bool facts_only_pos = true;
      for (int l : r.post_pos)
        if (GroundProgram::neg_of(l) || !fact_set.count(GroundProgram::atom_of(l)))
          facts_only_pos = false;
      if (r.head < 0) {
        // A constraint whose body does not mention the new state blocks the
        // action outright (guard constraints).
        if (r.post_pos.empty() && r.post_neg.empty()) {
          blocked = true;
          break;
        }
        continue;  // state-dependent constraint; verification handles it
      }
      if (r.post_pos.empty() && r.post_neg.empty()) {
        effects.push_back(&r);
        continue;
      }
      // Choice rule: positive head guarded by its own strong complement over
      // a nondeterministic-write fact body (inertia rules differ: they read
      // the old state and have no "if" atoms).
      if (!GroundProgram::neg_of(r.head) && !r.post_pos.empty() && facts_only_pos &&
          r.pre_pos_fl.empty() && r.post_neg.size() == 1 &&
          r.post_neg[0] == gp.complement(r.head)) {
        const std::string& name = gp.name(GroundProgram::atom_of(r.head));
        choices[name.substr(0, name.find('('))].push_back(r.head);
        continue;
      }
      frame.push_back(&r);
    }
    if (blocked) continue;

    // One candidate per combination of choice values.
    std::vector<std::vector<int>> groups;
    for (auto& [pred, lits] : choices) {
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      groups.push_back(lits);
    }
    std::vector<std::size_t> pick(groups.size(), 0);
    while (true) {
      // Seed: deterministic effects plus the picked choice literals and the
      // strong negation of the rejected alternatives.
      std::vector<int> seed;
      for (const GroundRule* r : effects) seed.push_back(r->head);
      for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t i = 0; i < groups[g].size(); ++i)
          seed.push_back(i == pick[g] ? groups[g][i] : gp.complement(groups[g][i]));

      PlanState cand;
      cand.lits = seed;
      std::sort(cand.lits.begin(), cand.lits.end());
      cand.lits.erase(std::unique(cand.lits.begin(), cand.lits.end()), cand.lits.end());

      if (consistent(cand)) {
        // Frame rules (inertia): negative conditions refer to literals
        // produced only by effects and choices, so one pass suffices.
        for (const GroundRule* r : frame)
          if (!intersects(r->post_neg, cand) && subset_modulo_facts(r->post_pos, cand, fact_set))
            insert_sorted(cand.lits, r->head);
        // Close under the static rules (var_def projection, guard fluents).
        auto closed = stratified_closure(gp, statics, cand.lits);
        if (closed && consistent(*closed)) {
          StateTransition t{s, actions, *closed};
          if (is_legal_transition(gp, t)) out.emplace_back(a, std::move(t.to));
        }
      }

      // Next combination.
      std::size_t g = 0;
      while (g < groups.size()) {
        if (++pick[g] < groups[g].size()) break;
        pick[g] = 0;
        ++g;
      }
      if (g == groups.size()) break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NetState lambda(const GroundProgram& gp, const PlanState& s) {
  if (!consistent(s)) throw DawError(ErrorCode::InconsistentState, "literal set is inconsistent");
  NetState out;
  const SymbolTable& sy = gp.symbols;
  for (int l : s.lits) {
    if (GroundProgram::neg_of(l)) continue;
    const std::string& name = gp.name(GroundProgram::atom_of(l));
    auto paren = name.find('(');
    if (paren == std::string::npos) {
      auto it = sy.fluent_place.find(name);
      if (it != sy.fluent_place.end()) out.marking.set(it->second, 1);
      continue;
    }
    std::string pred = name.substr(0, paren);
    auto vit = sy.varfluent_var.find(pred);
    if (vit == sy.varfluent_var.end()) continue;
    std::string arg = name.substr(paren + 1, name.size() - paren - 2);
    auto cit = sy.const_value.find(arg);
    if (cit == sy.const_value.end())
      throw DawError(ErrorCode::InconsistentState, "unknown constant " + arg);
    auto [pos, inserted] = out.eta.emplace(vit->second, cit->second);
    if (!inserted && !(pos->second == cit->second))
      throw DawError(ErrorCode::InconsistentState, "two values for variable " + vit->second);
  }
  return out;
}

bool goal_satisfied(const GroundProgram& gp, const PlanState& s) {
  for (const auto& [atom, negd] : gp.goal) {
    bool present = s.contains(GroundProgram::lit(atom, false));
    if (negd == present) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Equivalence checking (case <-> trajectory bisimulation under lambda).

namespace {

struct EquivalenceChecker {
  const DawNet& w;
  const GroundProgram& gp;
  std::uint32_t max_depth;
  EquivalenceReport report;
  std::map<std::pair<NetState, PlanState>, std::uint32_t> visited;  // remaining depth covered

  std::string describe(const std::vector<TransitionId>& path, const std::string& what) {
    std::ostringstream os;
    os << what << " after [";
    for (std::size_t i = 0; i < path.size(); ++i) os << (i ? " " : "") << path[i];
    os << "]";
    return os.str();
  }

  void check_guards(const PlanState& s, const NetState& ns) {
    for (const auto& [fluent, phi] : gp.symbols.guard_fluents) {
      auto it = gp.atom_ids.find(fluent);
      if (it == gp.atom_ids.end()) continue;  // mutated domain may drop fluents
      ++report.guard_checks;
      bool in_state = s.contains(GroundProgram::lit(it->second, false));
      bool holds = eval_guard(phi, w.dm, ns.eta);
      if (in_state != holds) {
        ++report.guard_mismatches;
        if (report.counterexample.empty())
          report.counterexample = "guard fluent " + fluent + " disagrees with evaluation";
      }
    }
  }

  void walk(const NetState& ns, const PlanState& s, std::uint32_t depth,
            std::vector<TransitionId>& path) {
    if (!report.equivalent) return;
    NetState mapped = lambda(gp, s);
    if (!(mapped == ns)) {
      report.equivalent = false;
      report.counterexample = describe(path, "lambda(state) diverges from the case state");
      return;
    }
    ++report.paired_states;
    check_guards(s, ns);
    std::uint32_t remaining = max_depth - depth;
    auto key = std::make_pair(ns, s);
    auto it = visited.find(key);
    if (it != visited.end() && it->second >= remaining) return;
    visited[key] = remaining;
    if (depth >= max_depth) return;

    // Net side: transition + successor state, keyed for matching.
    std::map<std::pair<TransitionId, NetState>, bool> net_succ;
    for (const FiringRecord& rec : enabled_firings(w, ns, ValueMode::Enumerate)) {
      NetState next = valid_fire(w, ns, rec.transition, rec.written);
      net_succ[{rec.transition, std::move(next)}] = true;
    }
    // Plan side.
    std::map<std::pair<TransitionId, NetState>, PlanState> plan_succ;
    for (const auto& [a, s2] : successors(gp, s)) {
      auto tit = gp.symbols.action_transition.find(gp.name(a));
      if (tit == gp.symbols.action_transition.end()) {
        report.equivalent = false;
        report.counterexample = describe(path, "action " + gp.name(a) + " has no net counterpart");
        return;
      }
      NetState next = lambda(gp, s2);
      auto [pos, inserted] = plan_succ.emplace(std::make_pair(tit->second, std::move(next)), s2);
      if (!inserted) {
        report.equivalent = false;
        report.counterexample =
            describe(path, "two legal transitions for " + tit->second + " map to one firing");
        return;
      }
    }

    for (const auto& [key2, unused] : net_succ) {
      if (!plan_succ.count(key2)) {
        report.equivalent = false;
        report.counterexample = describe(
            path, "firing of " + key2.first + " has no matching legal transition");
        return;
      }
    }
    for (const auto& [key2, s2] : plan_succ) {
      if (!net_succ.count(key2)) {
        report.equivalent = false;
        report.counterexample = describe(
            path, "legal transition for " + key2.first + " has no matching firing");
        return;
      }
    }
    for (const auto& [key2, s2] : plan_succ) {
      ++report.firings_checked;
      path.push_back(key2.first);
      walk(key2.second, s2, depth + 1, path);
      path.pop_back();
      if (!report.equivalent) return;
    }
  }
};

}  // namespace

EquivalenceReport check_equivalence_with(const DawNet& w, const PlanningDomain& pd,
                                         std::uint32_t depth) {
  for (const auto& [t, ws] : w.wr)
    for (const auto& [v, set] : ws)
      if (set.is_interval())
        throw DawError(ErrorCode::IntervalNotExpanded, "expand write intervals first");
  GroundProgram gp = ground(pd);
  auto init = legal_initial_states(gp);

  EquivalenceChecker checker{w, gp, depth, {}, {}};
  std::vector<TransitionId> path;
  checker.walk(initial_state(w), init.front(), 0, path);
  checker.report.equivalent = checker.report.equivalent && checker.report.guard_mismatches == 0;
  return checker.report;
}

EquivalenceReport check_equivalence(const DawNet& w, std::uint32_t depth) {
  SafenessVerdict sv = check_k_safe(w.net, w.meta, 1);
  if (!sv.safe())
    throw DawError(ErrorCode::InvalidArgument, "model is not control-flow 1-safe");
  return check_equivalence_with(w, encode(w), depth);
}

}  // namespace dawnet
