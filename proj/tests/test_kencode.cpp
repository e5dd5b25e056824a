#include <doctest.h>

#include "dawnet/kencode.hpp"
#include "support/builders.hpp"

using namespace dawnet;
using namespace dawnet::testing;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

bool has_line(const std::string& text, const std::string& line) {
  for (const auto& l : lines_of(text))
    if (l == line) return true;
  return false;
}

std::size_t count_prefix(const std::string& text, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& l : lines_of(text))
    if (l.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("encode the bare chain") {
  DawNet w = chain_net();
  PlanningDomain pd = encode(w);

  // 2 place fluents (+ the unused variable's fluents), 1 action.
  CHECK(pd.action_decls.size() == 1);
  CHECK(pd.symbols.place_fluent.size() == 2);

  std::size_t exec = 0, inertia = 0, transfer = 0, concurrency = 0;
  for (const auto& r : pd.rules) {
    if (r.kind == KRule::Kind::Executability) ++exec;
    else if (!r.head && r.pre_pos.size() == 2) ++concurrency;
    else if (r.head && r.post_neg.size() == 1 && r.pre_pos.size() == 1 &&
             r.head->atom == r.pre_pos[0].atom && r.head->atom.args.empty())
      ++inertia;
    else if (r.head && r.post_pos.empty() && r.post_neg.empty() && r.pre_pos.size() == 1 &&
             r.head->atom.args.empty() && !r.head->atom.pred.starts_with("var_") &&
             !r.head->atom.pred.starts_with("guard_"))
      ++transfer;
  }
  CHECK(exec == 1);
  CHECK(concurrency == 0);  // a single transition has no distinct pairs
  CHECK(transfer == 2);     // consume start, produce end
  CHECK(inertia == 2);      // one per place

  KText text = serialize(pd);
  CHECK(has_line(text.domain, "executable t if start."));
  CHECK(has_line(text.domain, "caused -start after t."));
  CHECK(has_line(text.domain, "caused end after t."));
  CHECK(has_line(text.domain, "caused start if not -start after start."));
  CHECK(has_line(text.problem, "initially: start."));
  CHECK(has_line(text.problem, "goal: end, not start?"));
}

TEST_CASE("encode rule-count formulas on the shrunk loan model") {
  DawNet w = loan_net_shrunk();
  PlanningDomain pd = encode(w);
  const std::size_t T = w.net.transitions.size();
  const std::size_t P = w.net.places.size();

  std::size_t exec = 0, concurrency = 0, place_inertia = 0, guard_constraints = 0;
  for (const auto& r : pd.rules) {
    if (r.kind == KRule::Kind::Executability) ++exec;
    else if (!r.head && r.pre_pos.size() == 2 && r.post_pos.empty()) ++concurrency;
    else if (!r.head && r.pre_pos.size() == 1 && r.pre_neg.size() == 1 &&
             r.pre_neg[0].atom.pred.starts_with("guard_"))
      ++guard_constraints;
    else if (r.head && !r.head->neg && r.head->atom.args.empty() &&
             pd.symbols.fluent_place.count(r.head->atom.pred) && r.post_neg.size() == 1 &&
             r.pre_pos.size() == 1 && r.pre_pos[0].atom == r.head->atom)
      ++place_inertia;
  }
  CHECK(exec == T);
  CHECK(concurrency == T * (T - 1));  // ordered pairs of distinct transitions
  CHECK(place_inertia == P);
  CHECK(guard_constraints == T);

  // The goal negates every non-end place.
  CHECK(pd.goal.size() == P);
  std::size_t negated = 0;
  for (const auto& [atom, negd] : pd.goal)
    if (negd) ++negated;
  CHECK(negated == P - 1);

  // Exactly one defining rule block per distinct guard subformula.
  for (const auto& [name, g] : pd.symbols.guard_fluents) {
    std::size_t defs = 0;
    for (const auto& r : pd.rules)
      if (r.kind == KRule::Kind::Causation && r.head && !r.head->neg &&
          r.head->atom.pred == name && r.pre_pos.empty())
        ++defs;
    CHECK(defs == 1);
  }
}

TEST_CASE("encode data rules") {
  DawNet w = chain_net();
  SUBCASE("deterministic single-value write") {
    w.wr["t"] = {{"x", WriteSet::explicit_set({Value::atom("unit", "u")})}};
    KText text = serialize(encode(w));
    CHECK(has_line(text.domain, "caused var_x(u) after t."));
    CHECK(has_line(text.domain, "caused var_change_x after t."));
    CHECK(has_line(text.domain, "vardom_x_t(u)."));
  }
  SUBCASE("nondeterministic write emits the four-rule block") {
    DawNet w2 = loan_net_shrunk();
    KText text = serialize(encode(w2));
    CHECK(has_line(text.domain,
                   "caused var_loantype(V) if vardom_loantype_t1(V), not -var_loantype(V) after t1."));
    CHECK(has_line(text.domain,
                   "caused -var_loantype(V) if vardom_loantype_t1(V), not var_loantype(V) after t1."));
    CHECK(has_line(text.domain, "caused false if not var_def_loantype after t1."));
    CHECK(has_line(text.domain, "caused var_change_loantype after t1."));
  }
  SUBCASE("deletion") {
    w.wr["t"] = {{"x", WriteSet::deletion()}};
    KText text = serialize(encode(w));
    CHECK(has_line(text.domain, "caused false if var_def_x after t."));
    CHECK(has_line(text.domain, "caused var_change_x after t."));
  }
  SUBCASE("variable constraints") {
    w.wr["t"] = {{"x", WriteSet::explicit_set({Value::atom("unit", "u")})}};
    KText text = serialize(encode(w));
    CHECK(has_line(text.domain, "caused false if var_x(X), var_x(Y), X != Y."));
    CHECK(has_line(text.domain, "caused var_x(X) if not -var_x(X), not var_change_x after var_x(X)."));
    CHECK(has_line(text.domain, "caused var_def_x if var_x(X)."));
  }
  SUBCASE("intervals must be expanded first") {
    CHECK_THROWS_WITH_AS(encode(loan_net()), doctest::Contains("IntervalNotExpanded"), DawError);
  }
}

TEST_CASE("encode guards") {
  DawNet w = loan_net_shrunk();
  PlanningDomain pd = encode(w);
  KText text = serialize(pd);

  // Find the fluent names of gd(T8) = !(request <= 99999) and its child.
  std::string outer, inner;
  for (const auto& [name, g] : pd.symbols.guard_fluents) {
    if (guard_equal(g, w.guard("T8"))) outer = name;
    if (g->kind == GuardExpr::Kind::Leq && g->rhs == Term::constant(Value::integer(99999)))
      inner = name;
  }
  REQUIRE(!outer.empty());
  REQUIRE(!inner.empty());
  CHECK(has_line(text.domain, "caused " + outer + " if not " + inner + "."));
  CHECK(has_line(text.domain,
                 "caused " + inner + " if var_request(T1), ord(T1, T2), T2 == 99999."));
  CHECK(has_line(text.domain, "caused false after t8, not " + outer + "."));

  // ord facts cover exactly the related pairs among the model's constants.
  CHECK(has_line(text.domain, "ord(0, 99999)."));
  CHECK(has_line(text.domain, "ord(60000, 60000)."));
  CHECK_FALSE(has_line(text.domain, "ord(60000, 5000)."));

  // Conjunctions are flattened to one n-ary rule.
  std::string conj;
  for (const auto& [name, g] : pd.symbols.guard_fluents)
    if (guard_equal(g, w.guard("T7"))) conj = name;
  REQUIRE(!conj.empty());
  std::size_t conj_rules = 0;
  for (const auto& r : pd.rules)
    if (r.head && r.head->atom.pred == conj) {
      ++conj_rules;
      CHECK(r.post_pos.size() == 2);  // both conjuncts, no nested And fluent
    }
  CHECK(conj_rules == 1);

  // The true guard is defined from the `true` literal.
  std::string truename;
  for (const auto& [name, g] : pd.symbols.guard_fluents)
    if (g->kind == GuardExpr::Kind::True) truename = name;
  REQUIRE(!truename.empty());
  CHECK(has_line(text.domain, "caused " + truename + " if true."));
}

TEST_CASE("serialize round-trips through the parser") {
  for (DawNet w : {chain_net(), loan_net_shrunk()}) {
    PlanningDomain pd = encode(w);
    KText text = serialize(pd);
    PlanningDomain back = parse_k(text.domain, text.problem);
    KText again = serialize(back);
    CHECK(again.domain == text.domain);
    CHECK(again.problem == text.problem);
    CHECK(back.rules == pd.rules);
    CHECK(back.background == pd.background);
    CHECK(back.initially == pd.initially);
    CHECK(back.goal == pd.goal);
  }
}

TEST_CASE("symbol mangling stays bijective under collisions") {
  DawNet w = chain_net();
  w.net.places.insert("T x");  // mangles to t_x
  w.net.transitions.insert("T.x");  // also mangles to t_x
  w.net.arcs.insert({"start", "T.x"});
  w.net.arcs.insert({"T.x", "T x"});
  w.net.arcs.insert({"T x", "t"});
  w.gd["T.x"] = GuardExpr::mk_true();
  PlanningDomain pd = encode(w);
  std::set<std::string> names;
  for (const auto& [p, f] : pd.symbols.place_fluent) CHECK(names.insert(f).second);
  for (const auto& [t, a] : pd.symbols.action_name) CHECK(names.insert(a).second);
}

TEST_CASE("serialize is deterministic") {
  DawNet w = loan_net_shrunk();
  KText a = serialize(encode(w));
  KText b = serialize(encode(w));
  CHECK(a.domain == b.domain);
  CHECK(a.problem == b.problem);
  CHECK(count_prefix(a.domain, "fluents:") == 1);
  CHECK(count_prefix(a.domain, "actions:") == 1);
}

TEST_CASE("empty domain serializes to the declaration header only") {
  PlanningDomain pd;
  KText text = serialize(pd);
  CHECK(text.domain == "fluents:.\nactions:.\n");
  CHECK(text.problem == "goal:?\n");
  PlanningDomain back = parse_k(text.domain, text.problem);
  CHECK(serialize(back).domain == text.domain);
}
