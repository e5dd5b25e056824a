#include "support/randnet.hpp"

#include <algorithm>

namespace dawnet::testing {

namespace {

class NetBuilder {
public:
  explicit NetBuilder(std::mt19937& rng) : rng_(rng) {}

  DawNet build(int max_transitions, int max_places) {
    DawNet w;
    w.meta.start = fresh_place();
    w.meta.end = fresh_place();
    w.net.places.insert(w.meta.start);
    w.net.places.insert(w.meta.end);
    block(w, w.meta.start, w.meta.end, max_transitions, max_places - 2);
    return w;
  }

private:
  struct Used {
    int transitions;
    int places;
  };

  PlaceId fresh_place() { return "p" + std::to_string(place_seq_++); }
  TransitionId fresh_transition() { return "t" + std::to_string(trans_seq_++); }

  // Recursive block between two existing places. Budgets are hard caps; each
  // child is guaranteed at least one transition.
  Used block(DawNet& w, const PlaceId& in, const PlaceId& out, int tb, int pb) {
    std::uniform_int_distribution<int> die(0, 9);
    int roll = die(rng_);
    if (tb >= 2 && pb >= 1 && roll < 5) {  // sequence
      PlaceId mid = fresh_place();
      w.net.places.insert(mid);
      Used a = block(w, in, mid, tb - 1, pb - 1);
      Used b = block(w, mid, out, tb - a.transitions, pb - 1 - a.places);
      return {a.transitions + b.transitions, 1 + a.places + b.places};
    }
    if (tb >= 2 && roll >= 5 && roll < 8) {  // exclusive choice
      Used a = block(w, in, out, tb - 1, pb);
      Used b = block(w, in, out, tb - a.transitions, pb - a.places);
      return {a.transitions + b.transitions, a.places + b.places};
    }
    if (tb >= 4 && pb >= 4 && roll == 8) {  // parallel split/join
      TransitionId split = fresh_transition();
      TransitionId join = fresh_transition();
      PlaceId a_in = fresh_place(), a_out = fresh_place();
      PlaceId b_in = fresh_place(), b_out = fresh_place();
      w.net.transitions.insert(split);
      w.net.transitions.insert(join);
      for (const auto& p : {a_in, a_out, b_in, b_out}) w.net.places.insert(p);
      w.net.arcs.insert({in, split});
      w.net.arcs.insert({split, a_in});
      w.net.arcs.insert({split, b_in});
      w.net.arcs.insert({a_out, join});
      w.net.arcs.insert({b_out, join});
      w.net.arcs.insert({join, out});
      Used a = block(w, a_in, a_out, tb - 3, pb - 4);
      Used b = block(w, b_in, b_out, tb - 2 - a.transitions, pb - 4 - a.places);
      return {2 + a.transitions + b.transitions, 4 + a.places + b.places};
    }
    TransitionId t = fresh_transition();
    w.net.transitions.insert(t);
    w.net.arcs.insert({in, t});
    w.net.arcs.insert({t, out});
    return {1, 0};
  }

  std::mt19937& rng_;
  std::uint32_t place_seq_ = 0;
  std::uint32_t trans_seq_ = 0;
};

Value domain_pick(std::mt19937& rng, const Domain& dom) {
  if (dom.is_interval()) {
    std::uniform_int_distribution<std::int64_t> d(dom.interval().lo, dom.interval().hi);
    return Value::integer(d(rng));
  }
  std::uniform_int_distribution<std::size_t> d(0, dom.values().size() - 1);
  return dom.values()[d(rng)];
}

GuardPtr random_guard(std::mt19937& rng, const DataModel& dm, std::uint32_t fuel) {
  std::vector<VarId> vars;
  for (const auto& [v, d] : dm.dm) vars.push_back(v);
  std::uniform_int_distribution<std::size_t> var_die(0, vars.size() - 1);
  std::uniform_int_distribution<int> die(0, 9);
  int roll = die(rng);
  if (fuel > 0 && roll < 2) return GuardExpr::mk_not(random_guard(rng, dm, fuel - 1));
  if (fuel > 0 && roll < 4)
    return GuardExpr::mk_and(random_guard(rng, dm, fuel - 1), random_guard(rng, dm, fuel - 1));
  const VarId& v = vars[var_die(rng)];
  const Domain& dom = dm.domain_of(v);
  switch (roll) {
    case 4:
      return GuardExpr::mk_def(v);
    case 5:
    case 6:
      return GuardExpr::mk_eq(Term::variable(v), Term::constant(domain_pick(rng, dom)));
    case 7: {
      const VarId& v2 = vars[var_die(rng)];
      return GuardExpr::mk_eq(Term::variable(v), Term::variable(v2));
    }
    case 8: {
      if (dm.dm.size() > 1 && die(rng) < 5) {
        const VarId& v2 = vars[var_die(rng)];
        if (dm.dm.at(v) == dm.dm.at(v2))
          return GuardExpr::mk_leq(Term::variable(v), Term::variable(v2));
      }
      return GuardExpr::mk_leq(Term::variable(v), Term::constant(domain_pick(rng, dom)));
    }
    default:
      return GuardExpr::mk_true();
  }
}

}  // namespace

std::optional<DawNet> random_dawnet(std::mt19937& rng, const RandNetOptions& opts) {
  NetBuilder builder(rng);
  DawNet w = builder.build(static_cast<int>(opts.max_transitions),
                           static_cast<int>(opts.max_places));
  if (w.net.places.size() > opts.max_places || w.net.transitions.size() > opts.max_transitions)
    return std::nullopt;

  // Data model.
  std::uniform_int_distribution<std::uint32_t> nvars_die(1, opts.max_vars);
  std::uniform_int_distribution<int> die(0, 9);
  std::uint32_t nvars = nvars_die(rng);
  for (std::uint32_t i = 0; i < nvars; ++i) {
    DomainId id = "d" + std::to_string(i);
    Domain dom;
    dom.id = id;
    if (opts.interval_mode) {
      dom.universe = IntInterval{0, opts.interval_universe};
      dom.ordered = true;
    } else if (die(rng) < 5) {
      std::uniform_int_distribution<std::int64_t> hi_die(2, 6);
      std::vector<Value> vals;
      for (std::int64_t k = 0; k <= hi_die(rng); ++k) vals.push_back(Value::integer(k));
      dom.universe = std::move(vals);
      dom.ordered = die(rng) < 7;
    } else {
      std::vector<Value> vals;
      for (char c : {'a', 'b', 'c'}) vals.push_back(Value::atom(id, std::string(1, c)));
      dom.universe = std::move(vals);
      dom.ordered = die(rng) < 4;
    }
    w.dm.domains.emplace(id, std::move(dom));
    w.dm.dm.emplace("v" + std::to_string(i), id);
  }

  // Writes, deletes, guards, observability.
  for (const auto& t : w.net.transitions) {
    for (const auto& [v, dom_id] : w.dm.dm) {
      int roll = die(rng);
      if (roll >= 3) continue;  // most transitions leave the variable alone
      if (roll == 2) {
        w.wr[t][v] = WriteSet::deletion();
        continue;
      }
      const Domain& dom = w.dm.domains.at(dom_id);
      if (opts.interval_mode && die(rng) < 6) {
        std::uniform_int_distribution<std::int64_t> lo_die(0, opts.interval_universe);
        std::int64_t lo = lo_die(rng);
        std::uniform_int_distribution<std::int64_t> hi_die(lo, opts.interval_universe);
        w.wr[t][v] = WriteSet::interval(lo, hi_die(rng));
      } else {
        std::uniform_int_distribution<std::uint32_t> n_die(1, opts.max_write_values);
        std::vector<Value> vals;
        for (std::uint32_t k = n_die(rng); k > 0; --k) vals.push_back(domain_pick(rng, dom));
        w.wr[t][v] = WriteSet::explicit_set(std::move(vals));
      }
    }
    w.gd[t] = die(rng) < 3 ? random_guard(rng, w.dm, 2) : GuardExpr::mk_true();
    int obs = die(rng);
    if (obs == 0)
      w.meta.observability[t] = Observability::Never;
    else if (obs == 1)
      w.meta.observability[t] = Observability::Always;
  }

  if (!validate_wfnet(w.net, w.meta).ok()) return std::nullopt;
  try {
    w.validate();
  } catch (const DawError&) {
    return std::nullopt;
  }
  return w;
}

std::vector<Case> complete_cases(const DawNet& w, std::uint32_t max_len) {
  std::vector<Case> out;
  for (Case& c : oracle_cases(w, max_len))
    if (is_goal_marking(w, c.final_state().marking)) out.push_back(std::move(c));
  return out;
}

Trace sample_compliant_trace(std::mt19937& rng, const DawNet& w, const Case& complete_case) {
  std::uniform_int_distribution<int> die(0, 9);
  Trace tau;
  for (const auto& [rec, state] : complete_case.steps) {
    bool always = w.meta.obs(rec.transition) == Observability::Always;
    bool never = w.meta.obs(rec.transition) == Observability::Never;
    if (never) continue;
    if (!always && die(rng) >= 6) continue;
    tau.events.push_back(Event{rec.transition, rec.written, rec.deleted});
  }
  return tau;
}

}  // namespace dawnet::testing
