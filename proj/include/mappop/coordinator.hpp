#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mappop/bus.hpp"
#include "mappop/plan.hpp"
#include "mappop/pop.hpp"
#include "mappop/rpg.hpp"
#include "mappop/task.hpp"

namespace mappop {

struct SolveConfig {
    int k = 4;                     // refinements per agent per call
    int node_budget = 10000;       // A* expansions per refine call
    int iteration_cap = 2000;
    unsigned seed = 1;
    double unknown_penalty = 1.0;  // F cost of a bottom-valued open goal
    double timeout_seconds = 600.0;
    bool parallel = false;
};

enum class Outcome { Solution, Unsolvable, BudgetExhausted };

struct SolveStats {
    int iterations = 0;
    int refine_expansions = 0;
    int pool_peak = 0;
};

struct SolveResult {
    Outcome outcome = Outcome::Unsolvable;
    std::optional<PartialPlan> plan;
    SolveStats stats;
    std::string reason;
};

// Round-robin baton: the holder advances one position per iteration.
struct BatonSchedule {
    int agent_count = 0;
    AgentId holder(int iteration) const { return iteration % agent_count; }
};

// A solution needs every agent's confirmation: some open goals are invisible
// to some agents.
bool check_solution(const PartialPlan& plan, const MapTask& task);

// The baton agent picks the open goal with the highest dis-RPG cost in its
// view (bottom-valued goals cost the penalty, unreachable ones rank first),
// ties by fluent order then step. nullopt if the agent's view has no open
// goals (the baton then passes).
std::optional<OpenGoal> select_open_goal(const PartialPlan& plan, AgentId agent,
                                         const Rpg& rpg, const MapTask& task,
                                         double unknown_penalty);

// The full refinement loop of the multi-agent planner. Requires the
// per-agent dis-RPGs; emits goal-selection, refinement, vote and baton
// messages on the bus every iteration.
SolveResult solve(const MapTask& task, const std::vector<Rpg>& rpgs, Bus& bus,
                  const SolveConfig& config);

}  // namespace mappop
