#pragma once

#include <string>
#include <vector>

#include "mappop/plan.hpp"
#include "mappop/task.hpp"

namespace mappop {

// Validation rules:
//   1 ordering sanity (acyclic, a0 first, a-infinity last)
//   2 causal support (every precondition backed by exactly one sound link)
//   3 threat freedom under every agent's view
//   4 concurrent consistency of unordered steps
//   5 per-agent solution confirmation (no open goals in any view)
struct Finding {
    int rule = 0;
    std::string location;
    std::string description;
};

struct Metrics {
    int acts = 0;
    int time_steps = 0;
    int participants = 0;
};

struct ValidationReport {
    bool valid = false;
    std::vector<Finding> findings;
    Metrics metrics;
};

// Independent checker: shares the plan/task data model with the planner but
// none of its threat or support logic.
ValidationReport validate(const PartialPlan& plan, const MapTask& task);

Metrics plan_metrics(const PartialPlan& plan, const MapTask& task);

// 1-based longest-chain level per step (0 for synthetic steps); parallel
// steps share a level.
std::vector<int> chain_levels(const PartialPlan& plan, const MapTask& task);

struct SimulationResult {
    bool success = false;
    int failed_sample = -1;    // linearization index
    std::string detail;
};

// Executes seeded random linearizations of the plan from the merged initial
// state under full information; succeeds iff every sampled order runs through
// and reaches all goals.
SimulationResult simulate(const PartialPlan& plan, const MapTask& task,
                          unsigned seed, int samples = 10);

// Mean percentage, over agents, of grounded actions touching a variable some
// other agent sees.
double coupling_level(const MapTask& task);

std::string report_to_string(const ValidationReport& r);

}  // namespace mappop
