#pragma once

#include <string>
#include <vector>

#include "dawnet/dawnet.hpp"
#include "dawnet/trace.hpp"

namespace dawnet::testing {

// start -> t -> end
DawNet chain_net();

// The twelve-transition loan process: start -> T1 -> p1, a student/worker
// choice (T2/T3), request entry (T4/T5), three approval levels (T6/T7/T8),
// the parallel notify/store pair (T10/T11) and final issue (T12).
// T1 writes loanType in {w,s}; T4 writes request in [0,30000]; T5 writes
// request in [0,500000].
DawNet loan_net();

// loan_net() with the approval transitions additionally writing the granted
// amount: wr(T6/T7/T8)(loan) = [0,500000].
DawNet loan_net_with_approvals();

// loan_net() with write sets shrunk to small explicit sets (encode-friendly):
// T4 writes {0, 20000}; T5 writes {0, 60000, 150000}; T1 unchanged.
DawNet loan_net_shrunk();

// loan_net() scaled to a [0,120] universe: T4 writes [0,30], T5 writes
// [0,120], guard constants 5 and 99.
DawNet loan_net_scaled();

Value lt_w();
Value lt_s();

Event ev(const std::string& t);
Event ev(const std::string& t, const std::map<VarId, Value>& writes);

}  // namespace dawnet::testing
