#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dawnet/trace.hpp"

namespace dawnet {

enum class DedupeMode { None, ControlFlow };

struct SearchConfig {
  ValueMode value_mode = ValueMode::Regions;
  std::uint32_t max_depth = 64;
  std::uint64_t max_states = 1000000;
  std::uint64_t max_solutions = 1000;
  DedupeMode dedupe = DedupeMode::None;
  std::int64_t enumerate_cap = 10000;
};

struct SearchOutcome {
  enum class Kind { Reachable, Unreachable, Inconclusive } kind;
  std::optional<Case> witness;  // first goal-reaching case found
  std::uint64_t explored = 0;

  bool reachable() const { return kind == Kind::Reachable; }
};

/// Breadth-first exploration of NetStates from the canonical initial state,
/// deduplicated on the full (marking, assignment) pair. Reachable returns the
/// first witness case; Unreachable means exploration closed under the caps;
/// Inconclusive means a cap was hit first.
SearchOutcome reachable_goal(const DawNet& w, const SearchConfig& cfg);

/// A complete case of the original model compliant with the partial trace.
struct Repair {
  Case repaired;                           // case of the original (un-normalized) model
  ComplianceWitness trace_alignment;       // trace index -> step index in `repaired`
  std::vector<TransitionId> control_flow;  // transition sequence of `repaired`

  auto operator<=>(const Repair&) const = default;
};

struct RepairResult {
  std::vector<Repair> repairs;  // lexicographic by control flow, then firing data
  bool truncated = false;       // a cap stopped enumeration early
};

/// Trace repair front-end: normalizes w, injects tau, enumerates all
/// goal-reaching cases of the trace workflow containing the last copy
/// transition, projects them back, keeps those that replay on w, and pairs
/// each with its compliance witness.
RepairResult enumerate_repairs(const DawNet& w, const Trace& tau, const SearchConfig& cfg);

/// Brute-force enumeration of all cases of length <= max_len (Enumerate
/// mode). Test oracle; depth-first, deterministic order.
std::vector<Case> oracle_cases(const DawNet& w, std::uint32_t max_len,
                               std::int64_t enumerate_cap = 10000);

}  // namespace dawnet
