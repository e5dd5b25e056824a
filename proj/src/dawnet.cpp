#include "dawnet/dawnet.hpp"

#include <algorithm>

namespace dawnet {

WriteSet WriteSet::explicit_set(std::vector<Value> vals) {
  if (vals.empty()) throw DawError(ErrorCode::InvalidArgument, "explicit write set must be nonempty");
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return WriteSet{std::move(vals)};
}

WriteSet WriteSet::interval(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw DawError(ErrorCode::InvalidArgument, "interval lo > hi");
  return WriteSet{IntInterval{lo, hi}};
}

bool WriteSet::contains(const Value& v) const {
  if (is_delete()) return false;
  if (is_interval()) return v.is_int() && as_interval().contains(v.as_int());
  const auto& vals = as_explicit();
  return std::binary_search(vals.begin(), vals.end(), v);
}

std::int64_t WriteSet::size() const {
  if (is_delete()) return 0;
  if (is_interval()) return as_interval().size();
  return static_cast<std::int64_t>(as_explicit().size());
}

GuardPtr DawNet::guard(const TransitionId& t) const {
  auto it = gd.find(t);
  if (it == gd.end() || !it->second) return GuardExpr::mk_true();
  return it->second;
}

const std::map<VarId, WriteSet>* DawNet::writes(const TransitionId& t) const {
  auto it = wr.find(t);
  return it == wr.end() ? nullptr : &it->second;
}

std::set<VarId> DawNet::written_vars(const TransitionId& t) const {
  std::set<VarId> out;
  if (const auto* ws = writes(t))
    for (const auto& [v, set] : *ws)
      if (!set.is_delete()) out.insert(v);
  return out;
}

std::set<VarId> DawNet::deleted_vars(const TransitionId& t) const {
  std::set<VarId> out;
  if (const auto* ws = writes(t))
    for (const auto& [v, set] : *ws)
      if (set.is_delete()) out.insert(v);
  return out;
}

void DawNet::validate() const {
  dm.validate();
  ValidationReport report = validate_wfnet(net, meta);
  if (!report.ok())
    throw DawError(ErrorCode::ValidationFailed,
                   "not a WF-net: " + report.violations.front().message + " (" +
                       report.violations.front().node + ")");
  for (const auto& [t, ws] : wr) {
    if (!net.has_transition(t)) throw DawError(ErrorCode::UnknownTransition, "wr for " + t);
    for (const auto& [v, set] : ws) {
      if (!dm.has_var(v)) throw DawError(ErrorCode::UnknownVariable, v + " in wr(" + t + ")");
      const Domain& dom = dm.domain_of(v);
      if (set.is_interval()) {
        const auto& iv = set.as_interval();
        if (!dom.contains(Value::integer(iv.lo)) || !dom.contains(Value::integer(iv.hi)))
          throw DawError(ErrorCode::ValidationFailed,
                         "wr(" + t + ")(" + v + ") exceeds the domain of " + v);
      } else if (set.is_explicit()) {
        for (const auto& val : set.as_explicit())
          if (!dom.contains(val))
            throw DawError(ErrorCode::ValidationFailed,
                           "wr(" + t + ")(" + v + ") contains " + to_string(val) +
                               " outside the domain of " + v);
      }
    }
  }
  for (const auto& [t, g] : gd) {
    if (!net.has_transition(t)) throw DawError(ErrorCode::UnknownTransition, "gd for " + t);
    for (const auto& v : guard_vars(g))
      if (!dm.has_var(v)) throw DawError(ErrorCode::UnknownVariable, v + " in gd(" + t + ")");
  }
}

std::vector<TransitionId> Case::control_flow() const {
  std::vector<TransitionId> out;
  out.reserve(steps.size());
  for (const auto& [r, s] : steps) out.push_back(r.transition);
  return out;
}

NetState initial_state(const DawNet& w) {
  return NetState{Marking({{w.meta.start, 1}}), {}};
}

bool is_goal_marking(const DawNet& w, const Marking& m) {
  const auto& nz = m.nonzero();
  return nz.size() == 1 && nz.begin()->first == w.meta.end && nz.begin()->second == 1;
}

NetState valid_fire(const DawNet& w, const NetState& s, const TransitionId& t,
                    const std::map<VarId, Value>& choice) {
  if (!w.net.has_transition(t)) throw DawError(ErrorCode::UnknownTransition, t);
  if (!is_enabled(w.net, s.marking, t)) throw DawError(ErrorCode::NotEnabled, t);
  if (!eval_guard(w.guard(t), w.dm, s.eta)) throw DawError(ErrorCode::GuardFalse, t);

  std::set<VarId> written = w.written_vars(t);
  std::set<VarId> deleted = w.deleted_vars(t);
  for (const auto& [v, val] : choice) {
    if (!written.count(v))
      throw DawError(ErrorCode::BadChoice, "choice for unwritten variable " + v + " at " + t);
    if (!w.writes(t)->at(v).contains(val))
      throw DawError(ErrorCode::BadChoice,
                     "value " + to_string(val) + " outside wr(" + t + ")(" + v + ")");
  }
  for (const auto& v : written)
    if (!choice.count(v)) throw DawError(ErrorCode::BadChoice, "missing choice for " + v + " at " + t);

  NetState out;
  out.marking = fire(w.net, s.marking, t);
  out.eta = s.eta;
  for (const auto& v : deleted) out.eta.erase(v);
  for (const auto& [v, val] : choice) out.eta[v] = val;
  return out;
}

// ---------------------------------------------------------------------------
// Region abstraction.
//
// Interval write sets are partitioned by a global pool of region start
// points harvested from the model: for Leq(v, c) add c+1, for Leq(c, v) add
// c, for equality against c add both c and c+1, and every explicit integer
// write value d contributes d and d+1 (an injected trace event pins values
// through singleton writes, so they must be representable exactly).

namespace {

void harvest_guard(const GuardPtr& g, std::set<std::int64_t>& starts, bool& var_var) {
  switch (g->kind) {
    case GuardExpr::Kind::True:
    case GuardExpr::Kind::Def:
      break;
    case GuardExpr::Kind::Eq:
    case GuardExpr::Kind::Leq: {
      const bool lv = g->lhs.is_var();
      const bool rv = g->rhs.is_var();
      if (lv && rv) var_var = true;
      auto add_const = [&](const Term& t, bool left_side) {
        if (t.is_var() || !t.val.is_int()) return;
        std::int64_t c = t.val.as_int();
        if (g->kind == GuardExpr::Kind::Eq) {
          starts.insert(c);
          starts.insert(c + 1);
        } else if (left_side) {
          starts.insert(c);  // c <= v splits at c
        } else {
          starts.insert(c + 1);  // v <= c splits at c+1
        }
      };
      add_const(g->lhs, true);
      add_const(g->rhs, false);
      break;
    }
    case GuardExpr::Kind::Not:
      harvest_guard(g->a, starts, var_var);
      break;
    case GuardExpr::Kind::And:
      harvest_guard(g->a, starts, var_var);
      harvest_guard(g->b, starts, var_var);
      break;
  }
}

}  // namespace

RegionTable RegionTable::build(const DawNet& w) {
  RegionTable table;
  std::set<std::int64_t> starts;
  for (const auto& t : w.net.transitions)
    harvest_guard(w.guard(t), starts, table.var_var_compare_);
  for (const auto& [t, ws] : w.wr) {
    for (const auto& [v, set] : ws) {
      if (set.is_explicit()) {
        for (const auto& val : set.as_explicit())
          if (val.is_int()) {
            starts.insert(val.as_int());
            starts.insert(val.as_int() + 1);
          }
      } else if (set.is_interval()) {
        starts.insert(set.as_interval().lo);
      }
    }
  }
  table.splits_.assign(starts.begin(), starts.end());
  return table;
}

std::vector<Value> RegionTable::candidates(const DawNet& w, const TransitionId& t,
                                           const VarId& v) const {
  const WriteSet& set = w.writes(t)->at(v);
  if (set.is_explicit()) return set.as_explicit();
  const IntInterval& iv = set.as_interval();
  // Region starts inside the interval, always including its lower bound.
  std::vector<std::int64_t> local{iv.lo};
  for (std::int64_t s : splits_)
    if (s > iv.lo && s <= iv.hi) local.push_back(s);
  std::sort(local.begin(), local.end());
  local.erase(std::unique(local.begin(), local.end()), local.end());
  std::vector<Value> out;
  for (std::size_t i = 0; i < local.size(); ++i) {
    std::int64_t begin = local[i];
    std::int64_t end = (i + 1 < local.size()) ? local[i + 1] - 1 : iv.hi;
    out.push_back(Value::integer(begin));
    // A second representative lets guards comparing two variables realise
    // both outcomes within one region.
    if (var_var_compare_ && begin < end) out.push_back(Value::integer(begin + 1));
  }
  return out;
}

std::vector<FiringRecord> enabled_firings(const DawNet& w, const NetState& s, ValueMode mode,
                                          std::int64_t enumerate_cap, const RegionTable* regions) {
  RegionTable local_regions;
  if (mode == ValueMode::Regions && regions == nullptr) {
    local_regions = RegionTable::build(w);
    regions = &local_regions;
  }

  std::vector<FiringRecord> out;
  for (const auto& t : w.net.transitions) {
    if (!is_enabled(w.net, s.marking, t)) continue;
    if (!eval_guard(w.guard(t), w.dm, s.eta)) continue;

    std::set<VarId> written = w.written_vars(t);
    std::set<VarId> deleted = w.deleted_vars(t);

    // Candidate values per written variable.
    std::vector<std::pair<VarId, std::vector<Value>>> options;
    bool feasible = true;
    for (const auto& v : written) {
      const WriteSet& set = w.writes(t)->at(v);
      std::vector<Value> vals;
      if (mode == ValueMode::Enumerate) {
        if (set.size() > enumerate_cap)
          throw DawError(ErrorCode::DomainTooLarge,
                         "wr(" + t + ")(" + v + ") has " + std::to_string(set.size()) +
                             " values (cap " + std::to_string(enumerate_cap) + ")");
        if (set.is_explicit()) {
          vals = set.as_explicit();
        } else {
          const auto& iv = set.as_interval();
          for (std::int64_t i = iv.lo; i <= iv.hi; ++i) vals.push_back(Value::integer(i));
        }
      } else {
        vals = regions->candidates(w, t, v);
      }
      if (vals.empty()) feasible = false;
      options.emplace_back(v, std::move(vals));
    }
    if (!feasible) continue;

    // Cross product of the per-variable candidates.
    std::vector<std::map<VarId, Value>> choices{{}};
    for (const auto& [v, vals] : options) {
      std::vector<std::map<VarId, Value>> next;
      next.reserve(choices.size() * vals.size());
      for (const auto& c : choices)
        for (const auto& val : vals) {
          auto c2 = c;
          c2.emplace(v, val);
          next.push_back(std::move(c2));
        }
      choices = std::move(next);
    }
    for (auto& c : choices) out.push_back(FiringRecord{t, std::move(c), deleted});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Case replay(const DawNet& w, const std::vector<FiringRecord>& records) {
  Case c;
  c.initial = initial_state(w);
  NetState cur = c.initial;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const FiringRecord& r = records[i];
    try {
      NetState next = valid_fire(w, cur, r.transition, r.written);
      if (r.deleted != w.deleted_vars(r.transition))
        throw DawError(ErrorCode::BadChoice, "record deletes do not match wr(" + r.transition + ")");
      c.steps.emplace_back(r, next);
      cur = std::move(next);
    } catch (const DawError& e) {
      throw DawError(ErrorCode::InvalidStep, "step " + std::to_string(i) + ": " + e.what());
    }
  }
  return c;
}

DawNet expand_intervals(const DawNet& w, std::int64_t cap) {
  DawNet out = w;
  for (auto& [t, ws] : out.wr) {
    for (auto& [v, set] : ws) {
      if (!set.is_interval()) continue;
      const auto& iv = set.as_interval();
      if (iv.size() > cap)
        throw DawError(ErrorCode::DomainTooLarge,
                       "interval wr(" + t + ")(" + v + ") has " + std::to_string(iv.size()) +
                           " values (cap " + std::to_string(cap) + ")");
      std::vector<Value> vals;
      for (std::int64_t i = iv.lo; i <= iv.hi; ++i) vals.push_back(Value::integer(i));
      set = WriteSet::explicit_set(std::move(vals));
    }
  }
  return out;
}

bool nets_equal(const DawNet& a, const DawNet& b) {
  if (!(a.net == b.net) || !(a.meta == b.meta) || !(a.wr == b.wr)) return false;
  if (a.dm.dm != b.dm.dm || a.dm.domains.size() != b.dm.domains.size()) return false;
  for (const auto& [id, dom] : a.dm.domains) {
    auto it = b.dm.domains.find(id);
    if (it == b.dm.domains.end()) return false;
    if (dom.universe != it->second.universe || dom.ordered != it->second.ordered ||
        dom.order_pairs != it->second.order_pairs)
      return false;
  }
  for (const auto& t : a.net.transitions)
    if (!guard_equal(a.guard(t), b.guard(t))) return false;
  return true;
}

DawNet regionize(const DawNet& w) {
  RegionTable regions = RegionTable::build(w);
  DawNet out = w;
  for (auto& [t, ws] : out.wr)
    for (auto& [v, set] : ws)
      if (set.is_interval()) set = WriteSet::explicit_set(regions.candidates(w, t, v));
  return out;
}

}  // namespace dawnet
