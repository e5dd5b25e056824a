#include "dawnet/search.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace dawnet {

SearchOutcome reachable_goal(const DawNet& w, const SearchConfig& cfg) {
  ValidationReport report = validate_wfnet(w.net, w.meta);
  if (!report.ok())
    throw DawError(ErrorCode::ValidationFailed, "not a WF-net: " + report.violations.front().message);

  RegionTable regions;
  if (cfg.value_mode == ValueMode::Regions) regions = RegionTable::build(w);

  SearchOutcome out{SearchOutcome::Kind::Unreachable, std::nullopt, 0};
  NetState s0 = initial_state(w);

  if (is_goal_marking(w, s0.marking)) {
    out.kind = SearchOutcome::Kind::Reachable;
    out.witness = Case{s0, {}};
    return out;
  }

  struct Node {
    NetState state;
    std::uint32_t depth;
  };
  std::set<NetState> visited{s0};
  std::map<NetState, std::pair<NetState, FiringRecord>> parent;
  std::deque<Node> queue{{s0, 0}};
  bool capped = false;

  while (!queue.empty()) {
    Node node = queue.front();
    queue.pop_front();
    ++out.explored;
    if (out.explored > cfg.max_states) {
      capped = true;
      break;
    }
    if (node.depth >= cfg.max_depth) {
      capped = true;
      continue;
    }
    for (const FiringRecord& rec :
         enabled_firings(w, node.state, cfg.value_mode, cfg.enumerate_cap, &regions)) {
      NetState next = valid_fire(w, node.state, rec.transition, rec.written);
      if (visited.count(next)) continue;
      visited.insert(next);
      parent.emplace(next, std::make_pair(node.state, rec));
      if (is_goal_marking(w, next.marking)) {
        // Reconstruct the witness case.
        std::vector<FiringRecord> records;
        NetState cur = next;
        while (!(cur == s0)) {
          auto it = parent.find(cur);
          records.push_back(it->second.second);
          cur = it->second.first;
        }
        std::reverse(records.begin(), records.end());
        out.kind = SearchOutcome::Kind::Reachable;
        out.witness = replay(w, records);
        return out;
      }
      queue.push_back({std::move(next), node.depth + 1});
    }
  }
  out.kind = capped ? SearchOutcome::Kind::Inconclusive : SearchOutcome::Kind::Unreachable;
  return out;
}

namespace {

// Depth-first enumeration of firing sequences; calls sink on goal-reaching
// cases. Returns false when a cap was hit (enumeration incomplete).
class CaseEnumerator {
public:
  CaseEnumerator(const DawNet& w, const SearchConfig& cfg) : w_(w), cfg_(cfg) {
    if (cfg.value_mode == ValueMode::Regions) regions_ = RegionTable::build(w);
  }

  // sink returns false to stop enumeration (solution cap).
  bool run(const std::function<bool(const std::vector<FiringRecord>&, const NetState&)>& sink) {
    sink_ = &sink;
    complete_ = true;
    stop_ = false;
    expanded_ = 0;
    path_.clear();
    NetState s0 = initial_state(w_);
    dfs(s0, 0);
    return complete_ && !stop_;
  }

private:
  void dfs(const NetState& s, std::uint32_t depth) {
    if (stop_) return;
    if (is_goal_marking(w_, s.marking)) {
      if (!(*sink_)(path_, s)) {
        stop_ = true;
        complete_ = false;
      }
      // The goal marking is dead in a WF-net (end has no outgoing arcs).
    }
    if (depth >= cfg_.max_depth) {
      complete_ = false;
      return;
    }
    if (++expanded_ > cfg_.max_states) {
      stop_ = true;
      complete_ = false;
      return;
    }
    for (const FiringRecord& rec :
         enabled_firings(w_, s, cfg_.value_mode, cfg_.enumerate_cap, &regions_)) {
      if (stop_) return;
      NetState next = valid_fire(w_, s, rec.transition, rec.written);
      path_.push_back(rec);
      dfs(next, depth + 1);
      path_.pop_back();
    }
  }

  const DawNet& w_;
  const SearchConfig& cfg_;
  RegionTable regions_;
  const std::function<bool(const std::vector<FiringRecord>&, const NetState&)>* sink_ = nullptr;
  std::vector<FiringRecord> path_;
  std::uint64_t expanded_ = 0;
  bool complete_ = true;
  bool stop_ = false;
};

}  // namespace

RepairResult enumerate_repairs(const DawNet& w, const Trace& tau, const SearchConfig& cfg) {
  ValidationReport report = validate_wfnet(w.net, w.meta);
  if (!report.ok())
    throw DawError(ErrorCode::ValidationFailed, "not a WF-net: " + report.violations.front().message);

  DawNet wn = normalize(w);
  DawNet wt = inject(wn, tau);
  const std::size_t n = tau.size();
  const TransitionId last_copy = n > 0 ? trace_transition_name(n) : TransitionId{};
  // Boundary firings belong in the repair only when the caller's model
  // already contained them.
  const bool strip_start = !w.meta.start_t.has_value();
  const bool strip_end = !w.meta.end_t.has_value();
  auto is_boundary = [&](const TransitionId& t) {
    return (strip_start && t == *wn.meta.start_t) || (strip_end && t == *wn.meta.end_t);
  };

  RepairResult result;
  std::set<Case> seen_cases;
  std::set<std::vector<TransitionId>> seen_flows;

  CaseEnumerator enumerator(wt, cfg);
  bool complete = enumerator.run([&](const std::vector<FiringRecord>& records, const NetState&) {
    if (n > 0 &&
        std::none_of(records.begin(), records.end(),
                     [&](const FiringRecord& r) { return r.transition == last_copy; }))
      return true;

    // Project copies back and strip the boundary transitions, restricting
    // written values to what the original transition writes; entries beyond
    // that are observations and must already agree with the state, which the
    // replay-and-compare below checks.
    std::vector<FiringRecord> stripped;
    for (const FiringRecord& rec : records) {
      TransitionId t = rec.transition;
      std::map<VarId, Value> written = rec.written;
      std::set<VarId> deleted = rec.deleted;
      if (auto idx = trace_transition_index(t)) {
        t = tau.events[*idx - 1].transition;
        std::set<VarId> wr_vars = w.written_vars(t);
        for (auto it = written.begin(); it != written.end();)
          it = wr_vars.count(it->first) ? std::next(it) : written.erase(it);
        deleted = w.deleted_vars(t);
      }
      if (is_boundary(t)) continue;
      stripped.push_back(FiringRecord{t, std::move(written), std::move(deleted)});
    }
    // Replay on the original model and recheck the data states against the
    // trace-workflow run (this is where observation mismatches drop out).
    Case replayed;
    try {
      replayed = replay(w, stripped);
    } catch (const DawError&) {
      return true;
    }
    {
      NetState cur = initial_state(wt);
      std::size_t k = 0;
      bool match = true;
      for (const FiringRecord& rec : records) {
        cur = valid_fire(wt, cur, rec.transition, rec.written);
        if (is_boundary(rec.transition)) continue;
        if (cur.eta != replayed.steps[k].second.eta) {
          match = false;
          break;
        }
        ++k;
      }
      if (!match) return true;
    }

    auto witness = check_compliance(w, replayed, tau);
    if (!witness) return true;

    if (cfg.dedupe == DedupeMode::ControlFlow) {
      if (!seen_flows.insert(replayed.control_flow()).second) return true;
    } else {
      if (!seen_cases.insert(replayed).second) return true;
    }
    Repair rep;
    rep.control_flow = replayed.control_flow();
    rep.repaired = std::move(replayed);
    rep.trace_alignment = std::move(*witness);
    result.repairs.push_back(std::move(rep));
    return result.repairs.size() < cfg.max_solutions;
  });
  result.truncated = !complete;

  std::sort(result.repairs.begin(), result.repairs.end(),
            [](const Repair& a, const Repair& b) {
              if (a.control_flow != b.control_flow) return a.control_flow < b.control_flow;
              return a.repaired < b.repaired;
            });
  return result;
}

std::vector<Case> oracle_cases(const DawNet& w, std::uint32_t max_len, std::int64_t enumerate_cap) {
  std::vector<Case> out;
  std::vector<FiringRecord> path;
  NetState s0 = initial_state(w);
  out.push_back(Case{s0, {}});

  std::function<void(const NetState&, std::uint32_t)> dfs = [&](const NetState& s,
                                                                std::uint32_t depth) {
    if (depth >= max_len) return;
    for (const FiringRecord& rec :
         enabled_firings(w, s, ValueMode::Enumerate, enumerate_cap, nullptr)) {
      NetState next = valid_fire(w, s, rec.transition, rec.written);
      path.push_back(rec);
      Case c;
      c.initial = s0;
      NetState cur = s0;
      for (const FiringRecord& r : path) {
        cur = valid_fire(w, cur, r.transition, r.written);
        c.steps.emplace_back(r, cur);
      }
      out.push_back(std::move(c));
      dfs(next, depth + 1);
      path.pop_back();
    }
  };
  dfs(s0, 0);
  return out;
}

}  // namespace dawnet
