#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dawnet/error.hpp"

namespace dawnet {

using PlaceId = std::string;
using TransitionId = std::string;
using NodeId = std::string;

/// Plain place/transition net. Arcs connect nodes of different kinds only.
struct PetriNet {
  std::set<PlaceId> places;
  std::set<TransitionId> transitions;
  std::set<std::pair<NodeId, NodeId>> arcs;

  bool has_place(const NodeId& n) const { return places.count(n) != 0; }
  bool has_transition(const NodeId& n) const { return transitions.count(n) != 0; }
  bool has_node(const NodeId& n) const { return has_place(n) || has_transition(n); }

  bool operator==(const PetriNet&) const = default;
};

enum class Observability { Always, Sometimes, Never };

const char* observability_name(Observability o);

struct WfNetMeta {
  PlaceId start;
  PlaceId end;
  std::map<TransitionId, Observability> observability;  // missing entries mean Sometimes
  // Set by normalize() to mark the synthetic boundary transitions.
  std::optional<TransitionId> start_t;
  std::optional<TransitionId> end_t;

  Observability obs(const TransitionId& t) const {
    auto it = observability.find(t);
    return it == observability.end() ? Observability::Sometimes : it->second;
  }

  bool operator==(const WfNetMeta&) const = default;
};

/// Total map place -> token count, stored sparsely (zero entries are absent).
class Marking {
public:
  Marking() = default;
  explicit Marking(std::map<PlaceId, std::uint32_t> tokens);

  std::uint32_t at(const PlaceId& p) const;
  void set(const PlaceId& p, std::uint32_t n);
  void add(const PlaceId& p, std::int64_t delta);

  const std::map<PlaceId, std::uint32_t>& nonzero() const { return tokens_; }
  std::uint64_t total() const;

  bool operator==(const Marking&) const = default;
  auto operator<=>(const Marking&) const = default;

private:
  std::map<PlaceId, std::uint32_t> tokens_;
};

std::string to_string(const Marking& m);

// Structural queries. `preset` is the set of nodes with an arc into `node`,
// `postset` the set of nodes reached by an arc from it.
std::set<NodeId> preset(const PetriNet& net, const NodeId& node);
std::set<NodeId> postset(const PetriNet& net, const NodeId& node);

struct Violation {
  enum class Kind {
    ArcEndpointMissing,
    ArcSameKind,
    StartMissing,
    EndMissing,
    StartHasIncoming,
    EndHasOutgoing,
    ExtraSource,
    ExtraSink,
    NotReachableFromStart,
    NotCoReachableToEnd,
  };
  Kind kind;
  NodeId node;  // offending node or arc description
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the WF-net conditions: unique source/sink, and every node on a
/// directed path from start to end. Violations are reported, not thrown.
ValidationReport validate_wfnet(const PetriNet& net, const WfNetMeta& meta);

/// Fires `t` from `m` (control-flow only). Throws NotEnabled or UnknownTransition.
Marking fire(const PetriNet& net, const Marking& m, const TransitionId& t);

bool is_enabled(const PetriNet& net, const Marking& m, const TransitionId& t);

struct SafenessVerdict {
  enum class Kind { Safe, Unsafe, Inconclusive } kind;
  std::uint32_t k = 0;
  std::vector<TransitionId> witness;  // firing sequence to an unsafe marking
  std::uint64_t explored = 0;

  bool safe() const { return kind == Kind::Safe; }
};

/// Exhaustively explores control-flow reachable markings from the initial
/// marking (one token in meta.start unless `initial` is given). Markings that
/// exceed k anywhere yield Unsafe with a witness path; hitting `bound`
/// explored markings yields Inconclusive.
SafenessVerdict check_k_safe(const PetriNet& net, const WfNetMeta& meta, std::uint32_t k,
                             std::uint64_t bound = 1000000,
                             const std::optional<Marking>& initial = std::nullopt);

}  // namespace dawnet
