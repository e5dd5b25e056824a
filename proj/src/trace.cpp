#include "dawnet/trace.hpp"

#include <algorithm>
#include <functional>

namespace dawnet {

bool firing_compliant(const DawNet& w, const NetState& before, const FiringRecord& rec,
                      const NetState& after, const Event& e) {
  if (rec.transition != e.transition) return false;
  // The deleted set is fully determined by the model transition.
  if (e.deletes != w.deleted_vars(e.transition)) return false;
  // dom(eta') = dom(w) u dom(eta) \ w^d
  std::set<VarId> expected;
  for (const auto& [v, val] : e.writes) expected.insert(v);
  for (const auto& [v, val] : before.eta)
    if (!e.deletes.count(v)) expected.insert(v);
  std::set<VarId> actual;
  for (const auto& [v, val] : after.eta) actual.insert(v);
  if (expected != actual) return false;
  for (const auto& [v, val] : e.writes) {
    auto it = after.eta.find(v);
    if (it == after.eta.end() || !(it->second == val)) return false;
  }
  return true;
}

std::optional<ComplianceWitness> check_compliance(const DawNet& w, const Case& c, const Trace& tau) {
  // Validate the case by replaying its records.
  std::vector<FiringRecord> records;
  records.reserve(c.steps.size());
  for (const auto& [r, s] : c.steps) records.push_back(r);
  Case replayed;
  try {
    replayed = replay(w, records);
  } catch (const DawError& e) {
    throw DawError(ErrorCode::InvalidCase, e.what());
  }
  if (!(replayed == c)) throw DawError(ErrorCode::InvalidCase, "case states do not match replay");

  const std::size_t ell = tau.size();
  const std::size_t k = c.steps.size();

  // match[i][j]: event i+1 compliant with step j+1.
  std::vector<std::vector<bool>> match(ell, std::vector<bool>(k, false));
  for (std::size_t j = 0; j < k; ++j) {
    const NetState& before = (j == 0) ? c.initial : c.steps[j - 1].second;
    for (std::size_t i = 0; i < ell; ++i)
      match[i][j] = firing_compliant(w, before, c.steps[j].first, c.steps[j].second, tau.events[i]);
  }
  std::vector<bool> always(k, false);
  for (std::size_t j = 0; j < k; ++j)
    always[j] = w.meta.obs(c.steps[j].first.transition) == Observability::Always;

  // f(i, j): events i.. embeddable into steps j.. with all Always steps from
  // j onward matched. Skipping a step is allowed only if it is not Always.
  std::vector<std::vector<signed char>> memo(ell + 1, std::vector<signed char>(k + 1, -1));
  std::function<bool(std::size_t, std::size_t)> f = [&](std::size_t i, std::size_t j) -> bool {
    if (memo[i][j] != -1) return memo[i][j] == 1;
    bool ok;
    if (j == k) {
      ok = (i == ell);
    } else {
      ok = false;
      if (i < ell && match[i][j] && f(i + 1, j + 1)) ok = true;
      if (!ok && !always[j] && f(i, j + 1)) ok = true;
    }
    memo[i][j] = ok ? 1 : 0;
    return ok;
  };
  if (!f(0, 0)) return std::nullopt;

  // Reconstruct the (lexicographically earliest) witness.
  ComplianceWitness witness;
  std::size_t i = 0, j = 0;
  while (j < k) {
    if (i < ell && match[i][j] && f(i + 1, j + 1)) {
      witness.gamma[i + 1] = j + 1;
      ++i;
      ++j;
    } else {
      ++j;
    }
  }
  return witness;
}

DawNet normalize(const DawNet& w) {
  if (w.meta.start_t && w.meta.end_t) return w;
  DawNet out = w;
  if (!out.meta.start_t) {
    if (out.net.has_node(kNormStartPlace) || out.net.has_node(kNormStartT))
      throw DawError(ErrorCode::InvalidArgument, "reserved normalization names already in use");
    out.net.places.insert(kNormStartPlace);
    out.net.transitions.insert(kNormStartT);
    out.net.arcs.insert({kNormStartPlace, kNormStartT});
    out.net.arcs.insert({kNormStartT, out.meta.start});
    out.meta.observability[kNormStartT] = Observability::Never;
    out.gd[kNormStartT] = GuardExpr::mk_true();
    out.meta.start = kNormStartPlace;
    out.meta.start_t = kNormStartT;
  }
  if (!out.meta.end_t) {
    if (out.net.has_node(kNormEndPlace) || out.net.has_node(kNormEndT))
      throw DawError(ErrorCode::InvalidArgument, "reserved normalization names already in use");
    out.net.places.insert(kNormEndPlace);
    out.net.transitions.insert(kNormEndT);
    out.net.arcs.insert({out.meta.end, kNormEndT});
    out.net.arcs.insert({kNormEndT, kNormEndPlace});
    out.meta.observability[kNormEndT] = Observability::Never;
    out.gd[kNormEndT] = GuardExpr::mk_true();
    out.meta.end = kNormEndPlace;
    out.meta.end_t = kNormEndT;
  }
  return out;
}

std::string trace_place_name(std::size_t i) { return "__trace.p" + std::to_string(i); }
std::string trace_transition_name(std::size_t i) { return "__trace.t" + std::to_string(i); }

std::optional<std::size_t> trace_transition_index(const TransitionId& t) {
  const std::string prefix = "__trace.t";
  if (t.rfind(prefix, 0) != 0) return std::nullopt;
  std::string digits = t.substr(prefix.size());
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  return std::stoul(digits);
}

DawNet inject(const DawNet& w, const Trace& tau) {
  if (!w.meta.start_t || !w.meta.end_t)
    throw DawError(ErrorCode::InvalidArgument, "inject requires a normalized net");

  // Event validation against wr.
  for (const Event& e : tau.events) {
    if (!w.net.has_transition(e.transition))
      throw DawError(ErrorCode::UnknownTransition, e.transition);
    const auto* ws = w.writes(e.transition);
    for (const auto& [v, val] : e.writes) {
      if (!w.dm.has_var(v)) throw DawError(ErrorCode::UnknownVariable, v);
      if (!w.dm.domain_of(v).contains(val))
        throw DawError(ErrorCode::PayloadViolatesWr,
                       "event " + e.transition + " writes " + to_string(val) +
                           " outside the domain of " + v);
      if (ws) {
        auto it = ws->find(v);
        if (it != ws->end() && !it->second.contains(val))
          throw DawError(ErrorCode::PayloadViolatesWr,
                         "event " + e.transition + " writes " + v + "=" + to_string(val) +
                             " outside wr(" + e.transition + ")(" + v + ")");
      }
      if (e.deletes.count(v))
        throw DawError(ErrorCode::PayloadViolatesWr,
                       "event " + e.transition + " both writes and deletes " + v);
    }
    std::set<VarId> model_deletes = w.deleted_vars(e.transition);
    for (const auto& v : e.deletes)
      if (!model_deletes.count(v))
        throw DawError(ErrorCode::PayloadViolatesWr,
                       "event " + e.transition + " deletes " + v + " but wr(" + e.transition +
                           ")(" + v + ") is not a deletion");
  }

  DawNet out = w;
  const std::size_t n = tau.size();
  for (std::size_t i = 0; i <= n; ++i) {
    if (out.net.has_node(trace_place_name(i)))
      throw DawError(ErrorCode::InvalidArgument, "reserved trace names already in use");
    out.net.places.insert(trace_place_name(i));
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const Event& e = tau.events[i - 1];
    std::string te = trace_transition_name(i);
    if (out.net.has_node(te))
      throw DawError(ErrorCode::InvalidArgument, "reserved trace names already in use");
    out.net.transitions.insert(te);
    // Copy the original transition's arcs in both directions.
    for (const auto& p : preset(w.net, e.transition)) out.net.arcs.insert({p, te});
    for (const auto& p : postset(w.net, e.transition)) out.net.arcs.insert({te, p});
    // Chain places.
    out.net.arcs.insert({trace_place_name(i - 1), te});
    out.net.arcs.insert({te, trace_place_name(i)});
    // Payload as singleton writes / deletions.
    std::map<VarId, WriteSet> ws;
    for (const auto& [v, val] : e.writes) ws.emplace(v, WriteSet::explicit_set({val}));
    for (const auto& v : e.deletes) ws.emplace(v, WriteSet::deletion());
    if (!ws.empty()) out.wr[te] = std::move(ws);
    out.gd[te] = w.guard(e.transition);
    out.meta.observability[te] = Observability::Sometimes;
  }
  out.net.arcs.insert({*w.meta.start_t, trace_place_name(0)});
  out.net.arcs.insert({trace_place_name(n), *w.meta.end_t});

  // Always-observable originals may only occur through their copies.
  for (const auto& t : w.net.transitions)
    if (w.meta.obs(t) == Observability::Always)
      out.gd[t] = GuardExpr::mk_not(GuardExpr::mk_true());

  return out;
}

Case project(const Trace& tau, const Case& c) {
  auto project_state = [&](const NetState& s) {
    NetState out;
    out.eta = s.eta;
    for (const auto& [p, n] : s.marking.nonzero())
      if (p.rfind("__trace.p", 0) != 0) out.marking.set(p, n);
    return out;
  };

  Case out;
  out.initial = project_state(c.initial);
  for (const auto& [rec, state] : c.steps) {
    FiringRecord r = rec;
    if (auto idx = trace_transition_index(rec.transition)) {
      if (*idx == 0 || *idx > tau.size())
        throw DawError(ErrorCode::NotATraceWorkflowCase,
                       rec.transition + " does not correspond to a trace event");
      r.transition = tau.events[*idx - 1].transition;
    }
    out.steps.emplace_back(std::move(r), project_state(state));
  }
  return out;
}

}  // namespace dawnet
