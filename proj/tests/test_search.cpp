#include <doctest.h>

#include <random>

#include "dawnet/kinterp.hpp"
#include "dawnet/search.hpp"
#include "support/builders.hpp"
#include "support/randnet.hpp"

using namespace dawnet;
using namespace dawnet::testing;

TEST_CASE("reachable_goal") {
  SUBCASE("loan net reaches the final marking") {
    SearchConfig cfg;
    SearchOutcome out = reachable_goal(loan_net(), cfg);
    REQUIRE(out.reachable());
    CHECK(is_goal_marking(loan_net(), out.witness->final_state().marking));
  }
  SUBCASE("unsatisfiable guard on the only start transition") {
    DawNet w = chain_net();
    w.gd["t"] = GuardExpr::mk_not(GuardExpr::mk_true());
    SearchConfig cfg;
    CHECK(reachable_goal(w, cfg).kind == SearchOutcome::Kind::Unreachable);
  }
  SUBCASE("depth cap yields inconclusive") {
    SearchConfig cfg;
    cfg.max_depth = 2;
    CHECK(reachable_goal(loan_net(), cfg).kind == SearchOutcome::Kind::Inconclusive);
  }
}

TEST_CASE("oracle_cases") {
  SUBCASE("chain has one case per length") {
    DawNet w = chain_net();
    auto cases = oracle_cases(w, 1);
    REQUIRE(cases.size() == 2);  // empty case + the single firing
    CHECK(cases[1].steps.size() == 1);
  }
  SUBCASE("diamond interleavings are both present") {
    // start -> split -> {a_in, b_in}; ta, tb in parallel; join -> end.
    DawNet w;
    Domain unit;
    unit.id = "unit";
    unit.universe = std::vector<Value>{Value::atom("unit", "u")};
    w.dm.domains.emplace("unit", std::move(unit));
    w.dm.dm = {{"x", "unit"}};
    w.net.places = {"start", "a_in", "b_in", "a_out", "b_out", "end"};
    w.net.transitions = {"split", "ta", "tb", "join"};
    w.net.arcs = {{"start", "split"}, {"split", "a_in"},  {"split", "b_in"},
                  {"a_in", "ta"},     {"b_in", "tb"},     {"ta", "a_out"},
                  {"tb", "b_out"},    {"a_out", "join"},  {"b_out", "join"},
                  {"join", "end"}};
    w.meta.start = "start";
    w.meta.end = "end";
    auto cases = oracle_cases(w, 4);
    std::set<std::vector<TransitionId>> flows;
    for (const auto& c : cases)
      if (c.steps.size() == 4) flows.insert(c.control_flow());
    CHECK(flows == std::set<std::vector<TransitionId>>{
                       {"split", "ta", "tb", "join"}, {"split", "tb", "ta", "join"}});
  }
  SUBCASE("max_len 0 keeps only the initial case") {
    CHECK(oracle_cases(loan_net_shrunk(), 0).size() == 1);
  }
}

TEST_CASE("enumerate_repairs basics") {
  SUBCASE("empty trace on the chain yields exactly one repair") {
    DawNet w = chain_net();
    SearchConfig cfg;
    RepairResult result = enumerate_repairs(w, Trace{}, cfg);
    REQUIRE(result.repairs.size() == 1);
    CHECK(result.repairs[0].control_flow == std::vector<TransitionId>{"t"});
    CHECK_FALSE(result.truncated);
  }
  SUBCASE("loan trace (T3, T7) gives the two published control flows") {
    SearchConfig cfg;
    cfg.dedupe = DedupeMode::ControlFlow;
    RepairResult result = enumerate_repairs(loan_net(), Trace{{ev("T3"), ev("T7")}}, cfg);
    std::set<std::vector<TransitionId>> flows;
    for (const auto& r : result.repairs) flows.insert(r.control_flow);
    CHECK(flows == std::set<std::vector<TransitionId>>{
                       {"T1", "T3", "T5", "T7", "T9", "T10", "T11", "T12"},
                       {"T1", "T3", "T5", "T7", "T9", "T11", "T10", "T12"}});
    CHECK(result.repairs.size() == 2);
  }
  SUBCASE("every repair replays and is compliant") {
    DawNet w = loan_net();
    Trace tau{{ev("T3"), ev("T7")}};
    SearchConfig cfg;
    RepairResult result = enumerate_repairs(w, tau, cfg);
    REQUIRE(!result.repairs.empty());
    for (const auto& rep : result.repairs) {
      std::vector<FiringRecord> recs;
      for (const auto& [r, s] : rep.repaired.steps) recs.push_back(r);
      Case replayed = replay(w, recs);
      CHECK(replayed == rep.repaired);
      CHECK(check_compliance(w, replayed, tau).has_value());
      CHECK(is_goal_marking(w, replayed.final_state().marking));
    }
  }
  SUBCASE("results are ordered and stable") {
    DawNet w = loan_net();
    SearchConfig cfg;
    Trace tau{{ev("T3"), ev("T7")}};
    RepairResult a = enumerate_repairs(w, tau, cfg);
    RepairResult b = enumerate_repairs(w, tau, cfg);
    CHECK(a.repairs == b.repairs);
    for (std::size_t i = 1; i < a.repairs.size(); ++i)
      CHECK(!(a.repairs[i] < a.repairs[i - 1]));
  }
  SUBCASE("observation payload pins the worker path") {
    DawNet w = loan_net_with_approvals();
    Trace tau{{ev("T7", {{"request", Value::integer(60000)}, {"loan", Value::integer(50000)}})}};
    SearchConfig cfg;
    cfg.dedupe = DedupeMode::ControlFlow;
    RepairResult result = enumerate_repairs(w, tau, cfg);
    REQUIRE(!result.repairs.empty());
    for (const auto& rep : result.repairs) {
      const auto& flow = rep.control_flow;
      CHECK(std::count(flow.begin(), flow.end(), "T3") == 1);
      CHECK(std::count(flow.begin(), flow.end(), "T5") == 1);
      CHECK(std::count(flow.begin(), flow.end(), "T2") == 0);
      CHECK(std::count(flow.begin(), flow.end(), "T4") == 0);
      CHECK(rep.repaired.steps[0].first.written.at("loanType") == lt_w());
    }
  }
}

TEST_CASE("repairs match the brute-force oracle") {
  // enumerate_repairs (dedupe=None) must equal the projections of all
  // goal-reaching trace-workflow cases containing the last copy transition.
  std::mt19937 rng(4242);
  RandNetOptions opts;
  int done = 0;
  while (done < 25) {
    auto maybe = random_dawnet(rng, opts);
    if (!maybe) continue;
    DawNet w = *maybe;
    auto cases = complete_cases(w, 10);
    if (cases.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, cases.size() - 1);
    Trace tau = sample_compliant_trace(rng, w, cases[pick(rng)]);

    SearchConfig cfg;
    cfg.value_mode = ValueMode::Enumerate;
    cfg.max_depth = 12;
    RepairResult result = enumerate_repairs(w, tau, cfg);
    REQUIRE_FALSE(result.truncated);

    std::set<Case> from_search;
    for (const auto& rep : result.repairs) from_search.insert(rep.repaired);

    // Independent route: enumerate trace-workflow cases with the oracle.
    DawNet wn = normalize(w);
    DawNet wt = inject(wn, tau);
    std::set<Case> from_oracle;
    for (const Case& c : oracle_cases(wt, 12)) {
      if (!is_goal_marking(wt, c.final_state().marking)) continue;
      bool has_last = tau.empty();
      for (const auto& [rec, state] : c.steps)
        if (!tau.empty() && rec.transition == trace_transition_name(tau.size())) has_last = true;
      if (!has_last) continue;
      Case projected = project(tau, c);
      // Strip the boundary firings and re-replay on the original model.
      std::vector<FiringRecord> recs;
      for (const auto& [rec, state] : projected.steps) {
        if (rec.transition == kNormStartT || rec.transition == kNormEndT) continue;
        FiringRecord r = rec;
        std::set<VarId> wr_vars = w.written_vars(r.transition);
        for (auto it = r.written.begin(); it != r.written.end();)
          it = wr_vars.count(it->first) ? std::next(it) : r.written.erase(it);
        r.deleted = w.deleted_vars(r.transition);
        recs.push_back(std::move(r));
      }
      from_oracle.insert(replay(w, recs));
    }
    CAPTURE(done);
    CHECK(from_search == from_oracle);
    ++done;
  }
}

TEST_CASE("repairs on an already-normalized model keep its boundary firings") {
  DawNet w = normalize(chain_net());
  SearchConfig cfg;
  RepairResult result = enumerate_repairs(w, Trace{}, cfg);
  REQUIRE(result.repairs.size() == 1);
  CHECK(result.repairs[0].control_flow ==
        std::vector<TransitionId>{kNormStartT, "t", kNormEndT});
  // The repair replays on the model as handed in.
  std::vector<FiringRecord> recs;
  for (const auto& [r, s] : result.repairs[0].repaired.steps) recs.push_back(r);
  CHECK_NOTHROW(replay(w, recs));
}

TEST_CASE("cyclic nets") {
  // start -> a -> p -> b -> q -> c -> end, with a rework loop q -> d -> p.
  DawNet w;
  Domain unit;
  unit.id = "unit";
  unit.universe = std::vector<Value>{Value::atom("unit", "u")};
  w.dm.domains.emplace("unit", std::move(unit));
  w.dm.dm = {{"x", "unit"}};
  w.net.places = {"start", "p", "q", "end"};
  w.net.transitions = {"a", "b", "c", "d"};
  w.net.arcs = {{"start", "a"}, {"a", "p"}, {"p", "b"}, {"b", "q"},
                {"q", "c"},     {"c", "end"}, {"q", "d"}, {"d", "p"}};
  w.meta.start = "start";
  w.meta.end = "end";
  REQUIRE(validate_wfnet(w.net, w.meta).ok());
  REQUIRE(check_k_safe(w.net, w.meta, 1).safe());

  SUBCASE("reachability terminates through the visited set") {
    SearchConfig cfg;
    CHECK(reachable_goal(w, cfg).reachable());
  }
  SUBCASE("case enumeration is depth-bounded and flags truncation") {
    SearchConfig cfg;
    cfg.max_depth = 9;
    cfg.dedupe = DedupeMode::ControlFlow;
    RepairResult result = enumerate_repairs(w, Trace{}, cfg);
    CHECK(result.truncated);  // longer rework cases exist beyond the cap
    std::set<std::vector<TransitionId>> flows;
    for (const auto& r : result.repairs) flows.insert(r.control_flow);
    CHECK(flows.count({"a", "b", "c"}) == 1);
    CHECK(flows.count({"a", "b", "d", "b", "c"}) == 1);
  }
  SUBCASE("a repeated event forces the loop") {
    SearchConfig cfg;
    cfg.max_depth = 12;
    cfg.dedupe = DedupeMode::ControlFlow;
    Trace tau{{ev("b"), ev("b")}};
    RepairResult result = enumerate_repairs(w, tau, cfg);
    REQUIRE(!result.repairs.empty());
    for (const auto& rep : result.repairs)
      CHECK(std::count(rep.control_flow.begin(), rep.control_flow.end(), "b") >= 2);
    std::set<std::vector<TransitionId>> flows;
    for (const auto& r : result.repairs) flows.insert(r.control_flow);
    CHECK(flows.count({"a", "b", "d", "b", "c"}) == 1);
  }
  SUBCASE("the encoding stays equivalent around the loop") {
    EquivalenceReport report = check_equivalence(w, 8);
    CHECK(report.ok());
    CHECK(report.paired_states > 5);
  }
  SUBCASE("injected-place token bound holds around the loop") {
    DawNet wt = inject(normalize(w), Trace{{ev("b"), ev("b")}});
    CHECK(check_k_safe(wt.net, wt.meta, 1).safe());
    for (const Case& c : oracle_cases(wt, 10)) {
      std::uint64_t sum = 0;
      for (const auto& [place, n] : c.final_state().marking.nonzero())
        if (place.rfind("__trace.p", 0) == 0) sum += n;
      CHECK(sum <= 1);
    }
  }
}
