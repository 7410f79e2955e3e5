#pragma once

#include <string>

#include "mappop/plan.hpp"
#include "mappop/task.hpp"

namespace mappop {

// Plan file format:
//   ; plan <problem>
//   t: agent action(arg,...)[, agent action(arg,...)]*
//   ; acts=<n> ts=<n> partics=<n>
// One line per time step (longest-chain level), steps within a line sorted
// by agent then action.
std::string write_plan(const PartialPlan& plan, const MapTask& task,
                       const std::string& problem_name);

// Rebuilds a partial plan from the file: the printed levels induce the
// orderings (level t strictly before level t+1), causal links are inferred
// from the latest entailing producer. Unsupportable preconditions stay open
// for the validator to flag.
PartialPlan read_plan(const std::string& text, const MapTask& task);

}  // namespace mappop
