#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dawnet/data.hpp"
#include "dawnet/net.hpp"

namespace dawnet {

/// Per-(transition, variable) write specification: a nonempty explicit value
/// set, a finite integer interval, or a deletion.
struct WriteSet {
  struct Delete {
    auto operator<=>(const Delete&) const = default;
  };
  std::variant<std::vector<Value>, IntInterval, Delete> w;  // explicit values sorted, unique

  static WriteSet explicit_set(std::vector<Value> vals);
  static WriteSet interval(std::int64_t lo, std::int64_t hi);
  static WriteSet deletion() { return WriteSet{Delete{}}; }

  bool is_delete() const { return std::holds_alternative<Delete>(w); }
  bool is_interval() const { return std::holds_alternative<IntInterval>(w); }
  bool is_explicit() const { return std::holds_alternative<std::vector<Value>>(w); }
  const IntInterval& as_interval() const { return std::get<IntInterval>(w); }
  const std::vector<Value>& as_explicit() const { return std::get<std::vector<Value>>(w); }

  bool contains(const Value& v) const;
  /// Number of admissible values (0 for deletions).
  std::int64_t size() const;

  auto operator<=>(const WriteSet&) const = default;
};

struct DawNet {
  PetriNet net;
  WfNetMeta meta;
  DataModel dm;
  std::map<TransitionId, std::map<VarId, WriteSet>> wr;  // partial per transition
  std::map<TransitionId, GuardPtr> gd;                   // total (True by default)

  GuardPtr guard(const TransitionId& t) const;
  const std::map<VarId, WriteSet>* writes(const TransitionId& t) const;
  /// Variables t writes (nonempty write set).
  std::set<VarId> written_vars(const TransitionId& t) const;
  /// Variables t deletes (empty write set).
  std::set<VarId> deleted_vars(const TransitionId& t) const;

  /// Structural and data validation; throws on the first defect.
  void validate() const;
};

struct NetState {
  Marking marking;
  Assignment eta;

  bool operator==(const NetState&) const = default;
  auto operator<=>(const NetState&) const = default;
};

/// Concrete witness of one valid firing: transition plus chosen writes.
struct FiringRecord {
  TransitionId transition;
  std::map<VarId, Value> written;
  std::set<VarId> deleted;

  bool operator==(const FiringRecord&) const = default;
  auto operator<=>(const FiringRecord&) const = default;
};

struct Case {
  NetState initial;
  std::vector<std::pair<FiringRecord, NetState>> steps;

  const NetState& final_state() const { return steps.empty() ? initial : steps.back().second; }
  std::vector<TransitionId> control_flow() const;

  bool operator==(const Case&) const = default;
  auto operator<=>(const Case&) const = default;
};

/// Canonical initial state: one token in start, empty assignment.
NetState initial_state(const DawNet& w);

/// Goal state test: one token in end, all other places empty.
bool is_goal_marking(const DawNet& w, const Marking& m);

/// Fires t from s. `choice` must supply exactly one value from wr(t)(v) for
/// each written variable v. Throws NotEnabled, GuardFalse or BadChoice.
NetState valid_fire(const DawNet& w, const NetState& s, const TransitionId& t,
                    const std::map<VarId, Value>& choice);

enum class ValueMode { Enumerate, Regions };

/// Integer-region abstraction for interval write sets: the partition of each
/// interval induced by the model's guard constants and explicit write values.
/// Representatives are the least elements of each region (two per region when
/// a guard compares two variables).
class RegionTable {
public:
  static RegionTable build(const DawNet& w);
  /// Candidate values for writing `v` at transition `t`.
  std::vector<Value> candidates(const DawNet& w, const TransitionId& t, const VarId& v) const;
  const std::vector<std::int64_t>& split_points() const { return splits_; }

private:
  std::vector<std::int64_t> splits_;  // sorted region start candidates (global pool)
  bool var_var_compare_ = false;      // some guard compares two variables
};

/// All valid firings from s. Enumerate mode lists every concrete choice and
/// throws DomainTooLarge past `enumerate_cap` values per write set; Regions
/// mode uses region representatives for interval writes.
std::vector<FiringRecord> enabled_firings(const DawNet& w, const NetState& s, ValueMode mode,
                                          std::int64_t enumerate_cap = 10000,
                                          const RegionTable* regions = nullptr);

/// Replays the records from the canonical initial state. Throws
/// InvalidStep(index, cause) at the first invalid step.
Case replay(const DawNet& w, const std::vector<FiringRecord>& records);

/// Replaces interval write sets by explicitly enumerated sets; throws
/// DomainTooLarge past `cap` values per interval.
DawNet expand_intervals(const DawNet& w, std::int64_t cap = 10000);

/// Replaces interval write sets by their region representatives.
DawNet regionize(const DawNet& w);

/// Structural equality (guards compared structurally).
bool nets_equal(const DawNet& a, const DawNet& b);

}  // namespace dawnet
