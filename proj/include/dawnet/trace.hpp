#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dawnet/dawnet.hpp"

namespace dawnet {

/// One observed log entry: the transition it refers to, the values it wrote
/// and the variables it deleted. A write entry for a variable the model
/// transition does not write acts as an observation: it pins the value the
/// variable must hold right after the firing.
struct Event {
  TransitionId transition;
  std::map<VarId, Value> writes;
  std::set<VarId> deletes;

  bool operator==(const Event&) const = default;
  auto operator<=>(const Event&) const = default;
};

struct Trace {
  std::vector<Event> events;

  bool empty() const { return events.empty(); }
  std::size_t size() const { return events.size(); }

  bool operator==(const Trace&) const = default;
};

/// Injective, strictly order-preserving map from trace index (1-based) to
/// case step index (1-based).
struct ComplianceWitness {
  std::map<std::size_t, std::size_t> gamma;

  bool operator==(const ComplianceWitness&) const = default;
  auto operator<=>(const ComplianceWitness&) const = default;
};

/// True iff the i-th step of c (a firing (M,eta) -> (M',eta')) is compliant
/// with the event: same transition, deletes equal to the model's deletes,
/// dom(eta') = dom(w) + dom(eta) - deletes, and eta' agrees with w.
bool firing_compliant(const DawNet& w, const NetState& before, const FiringRecord& rec,
                      const NetState& after, const Event& e);

/// Searches for a compliance witness: an order-preserving injective embedding
/// of the trace into the case where every Always-observable firing is matched.
/// Returns nullopt when none exists. Throws InvalidCase when c does not
/// replay on w.
std::optional<ComplianceWitness> check_compliance(const DawNet& w, const Case& c, const Trace& tau);

inline constexpr const char* kNormStartPlace = "__norm.start";
inline constexpr const char* kNormEndPlace = "__norm.end";
inline constexpr const char* kNormStartT = "__norm.start_t";
inline constexpr const char* kNormEndT = "__norm.end_t";

/// Adds the boundary transitions start_t/end_t with fresh source and sink
/// places, guard true, no writes, observability Never. Idempotent.
DawNet normalize(const DawNet& w);

/// Fresh-name scheme for injected nodes (i is 1-based for transitions).
std::string trace_place_name(std::size_t i);       // __trace.p{i}, i from 0
std::string trace_transition_name(std::size_t i);  // __trace.t{i}, i from 1
/// Parses an injected transition name back to its 1-based event index.
std::optional<std::size_t> trace_transition_index(const TransitionId& t);

/// Builds the trace workflow W^tau of a normalized net: one copy transition
/// per event wired in sequence through fresh places, event payloads becoming
/// singleton writes, and guard false for Always-observable original
/// transitions. Throws UnknownTransition / PayloadViolatesWr on bad events.
DawNet inject(const DawNet& normalized, const Trace& tau);

/// Structural projection of a W^tau case: copy transitions map back to their
/// originals and injected places are dropped; assignments are kept.
Case project(const Trace& tau, const Case& c);

}  // namespace dawnet
