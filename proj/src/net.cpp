#include "dawnet/net.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace dawnet {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::NotEnabled: return "NotEnabled";
    case ErrorCode::UnknownTransition: return "UnknownTransition";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::GuardFalse: return "GuardFalse";
    case ErrorCode::BadChoice: return "BadChoice";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::InvalidCase: return "InvalidCase";
    case ErrorCode::PayloadViolatesWr: return "PayloadViolatesWr";
    case ErrorCode::NotATraceWorkflowCase: return "NotATraceWorkflowCase";
    case ErrorCode::DomainTooLarge: return "DomainTooLarge";
    case ErrorCode::IntervalNotExpanded: return "IntervalNotExpanded";
    case ErrorCode::UnboundedVariable: return "UnboundedVariable";
    case ErrorCode::ContradictionInInit: return "ContradictionInInit";
    case ErrorCode::InconsistentState: return "InconsistentState";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

const char* observability_name(Observability o) {
  switch (o) {
    case Observability::Always: return "always";
    case Observability::Sometimes: return "sometimes";
    case Observability::Never: return "never";
  }
  return "?";
}

Marking::Marking(std::map<PlaceId, std::uint32_t> tokens) : tokens_(std::move(tokens)) {
  for (auto it = tokens_.begin(); it != tokens_.end();) {
    if (it->second == 0)
      it = tokens_.erase(it);
    else
      ++it;
  }
}

std::uint32_t Marking::at(const PlaceId& p) const {
  auto it = tokens_.find(p);
  return it == tokens_.end() ? 0 : it->second;
}

void Marking::set(const PlaceId& p, std::uint32_t n) {
  if (n == 0)
    tokens_.erase(p);
  else
    tokens_[p] = n;
}

void Marking::add(const PlaceId& p, std::int64_t delta) {
  std::int64_t v = static_cast<std::int64_t>(at(p)) + delta;
  if (v < 0) throw DawError(ErrorCode::InvalidArgument, "negative token count at " + p);
  set(p, static_cast<std::uint32_t>(v));
}

std::uint64_t Marking::total() const {
  std::uint64_t s = 0;
  for (const auto& [p, n] : tokens_) s += n;
  return s;
}

std::string to_string(const Marking& m) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [p, n] : m.nonzero()) {
    if (!first) os << ", ";
    os << p << ":" << n;
    first = false;
  }
  os << "}";
  return os.str();
}

std::set<NodeId> preset(const PetriNet& net, const NodeId& node) {
  if (!net.has_node(node)) throw DawError(ErrorCode::NotFound, "unknown node " + node);
  std::set<NodeId> result;
  for (const auto& [a, b] : net.arcs)
    if (b == node) result.insert(a);
  return result;
}

std::set<NodeId> postset(const PetriNet& net, const NodeId& node) {
  if (!net.has_node(node)) throw DawError(ErrorCode::NotFound, "unknown node " + node);
  std::set<NodeId> result;
  for (const auto& [a, b] : net.arcs)
    if (a == node) result.insert(b);
  return result;
}

namespace {

// Forward (or backward) closure over the arc relation from a seed node.
std::set<NodeId> closure(const PetriNet& net, const NodeId& seed, bool forward) {
  std::set<NodeId> seen;
  std::deque<NodeId> queue;
  if (net.has_node(seed)) {
    seen.insert(seed);
    queue.push_back(seed);
  }
  while (!queue.empty()) {
    NodeId n = queue.front();
    queue.pop_front();
    for (const auto& [a, b] : net.arcs) {
      const NodeId& from = forward ? a : b;
      const NodeId& to = forward ? b : a;
      if (from == n && seen.insert(to).second) queue.push_back(to);
    }
  }
  return seen;
}

}  // namespace

ValidationReport validate_wfnet(const PetriNet& net, const WfNetMeta& meta) {
  ValidationReport report;
  auto flag = [&](Violation::Kind k, const NodeId& n, std::string msg) {
    report.violations.push_back({k, n, std::move(msg)});
  };

  for (const auto& [a, b] : net.arcs) {
    std::string arc = a + " -> " + b;
    if (!net.has_node(a) || !net.has_node(b)) {
      flag(Violation::Kind::ArcEndpointMissing, arc, "arc endpoint not declared");
      continue;
    }
    if (net.has_place(a) == net.has_place(b))
      flag(Violation::Kind::ArcSameKind, arc, "arc connects nodes of the same kind");
  }

  if (!net.has_place(meta.start)) {
    flag(Violation::Kind::StartMissing, meta.start, "start place not in net");
    return report;
  }
  if (!net.has_place(meta.end)) {
    flag(Violation::Kind::EndMissing, meta.end, "end place not in net");
    return report;
  }

  for (const auto& [a, b] : net.arcs) {
    if (b == meta.start) flag(Violation::Kind::StartHasIncoming, meta.start, "arc into start place");
    if (a == meta.end) flag(Violation::Kind::EndHasOutgoing, meta.end, "arc out of end place");
  }

  // Unique source / sink among places.
  for (const auto& p : net.places) {
    if (p != meta.start && preset(net, p).empty())
      flag(Violation::Kind::ExtraSource, p, "place has no incoming arcs");
    if (p != meta.end && postset(net, p).empty())
      flag(Violation::Kind::ExtraSink, p, "place has no outgoing arcs");
  }

  std::set<NodeId> fwd = closure(net, meta.start, true);
  std::set<NodeId> bwd = closure(net, meta.end, false);
  auto check_node = [&](const NodeId& n) {
    if (!fwd.count(n)) flag(Violation::Kind::NotReachableFromStart, n, "not reachable from start");
    if (!bwd.count(n)) flag(Violation::Kind::NotCoReachableToEnd, n, "end not reachable from node");
  };
  for (const auto& p : net.places) check_node(p);
  for (const auto& t : net.transitions) check_node(t);

  return report;
}

bool is_enabled(const PetriNet& net, const Marking& m, const TransitionId& t) {
  for (const auto& p : preset(net, t))
    if (m.at(p) == 0) return false;
  return true;
}

Marking fire(const PetriNet& net, const Marking& m, const TransitionId& t) {
  if (!net.has_transition(t)) throw DawError(ErrorCode::UnknownTransition, t);
  std::set<NodeId> pre = preset(net, t);
  std::set<NodeId> post = postset(net, t);
  for (const auto& p : pre)
    if (m.at(p) == 0) throw DawError(ErrorCode::NotEnabled, t + " lacks token in " + p);
  Marking out = m;
  for (const auto& p : pre)
    if (!post.count(p)) out.add(p, -1);
  for (const auto& p : post)
    if (!pre.count(p)) out.add(p, +1);
  return out;
}

SafenessVerdict check_k_safe(const PetriNet& net, const WfNetMeta& meta, std::uint32_t k,
                             std::uint64_t bound, const std::optional<Marking>& initial) {
  if (k < 1) throw DawError(ErrorCode::InvalidArgument, "k must be >= 1");
  Marking m0 = initial.value_or(Marking({{meta.start, 1}}));

  auto over = [&](const Marking& m) -> std::optional<PlaceId> {
    for (const auto& [p, n] : m.nonzero())
      if (n > k) return p;
    return std::nullopt;
  };

  SafenessVerdict verdict{SafenessVerdict::Kind::Safe, k, {}, 0};
  if (over(m0)) {
    verdict.kind = SafenessVerdict::Kind::Unsafe;
    return verdict;
  }

  // BFS over k-bounded markings; a successor above k is an Unsafe witness.
  std::map<Marking, std::pair<Marking, TransitionId>> parent;  // child -> (parent, fired)
  std::set<Marking> seen{m0};
  std::deque<Marking> queue{m0};
  while (!queue.empty()) {
    Marking m = queue.front();
    queue.pop_front();
    ++verdict.explored;
    if (verdict.explored > bound) {
      verdict.kind = SafenessVerdict::Kind::Inconclusive;
      return verdict;
    }
    for (const auto& t : net.transitions) {
      if (!is_enabled(net, m, t)) continue;
      Marking next = fire(net, m, t);
      if (!seen.count(next)) {
        seen.insert(next);
        parent.emplace(next, std::make_pair(m, t));
        if (over(next)) {
          verdict.kind = SafenessVerdict::Kind::Unsafe;
          // Reconstruct the firing sequence back to m0.
          std::vector<TransitionId> path;
          Marking cur = next;
          while (!(cur == m0)) {
            auto it = parent.find(cur);
            path.push_back(it->second.second);
            cur = it->second.first;
          }
          std::reverse(path.begin(), path.end());
          verdict.witness = std::move(path);
          return verdict;
        }
        queue.push_back(next);
      }
    }
  }
  return verdict;
}

}  // namespace dawnet
