#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mappop/bus.hpp"
#include "mappop/plan.hpp"
#include "mappop/rpg.hpp"
#include "mappop/task.hpp"

namespace mappop {

struct Threat {
    int step = -1;
    CausalLink link;
    auto operator<=>(const Threat&) const = default;
};

// Filtered/projected view of a plan for one agent: open goals over the
// agent's variables (values possibly bottom), links over its variables with
// projected fluents. Step and ordering structure is that of the plan itself.
struct PlanView {
    AgentId agent = kNoAgent;
    std::vector<OpenGoal> open;
    struct Link {
        int producer;
        int consumer;
        Fluent fluent;  // value kBottom under partial visibility
    };
    std::vector<Link> links;
};

PlanView project_plan(const PartialPlan& plan, AgentId agent, const MapTask& task);

// Threats as seen by one agent: steps unordered with respect to a causal
// link whose effect on the link's variable conflicts with the link's fluent
// in that agent's view. A hidden value can never equal a visible one; the
// conflict rules build on that.
std::vector<Threat> detect_threats(const PartialPlan& plan, AgentId viewer,
                                   const MapTask& task);

// Union over all agents' views, deduplicated.
std::vector<Threat> detect_threats_all_views(const PartialPlan& plan,
                                             const MapTask& task);

// Promotion (threatening step after the consumer) and demotion (before the
// producer); children that would create a cycle are dropped.
std::vector<PartialPlan> resolve_threat(const PartialPlan& plan, const Threat& t,
                                        const MapTask& task);

// Sum of dis-RPG costs over the view's open goals (bottom-valued goals cost
// `unknown_penalty`, unreachable ones infinity) plus the view's threat count.
double heuristic_value(const PartialPlan& plan, AgentId agent, const Rpg& rpg,
                       const MapTask& task, double unknown_penalty);

struct SearchBudget {
    int max_expansions = 10000;
    int max_plans = 4;  // k
    int max_steps = -1;  // non-synthetic step cap; -1 = unbounded
};

struct RefineResult {
    std::vector<RefinementStep> steps;
    std::vector<PartialPlan> plans;  // composed, parallel to steps
    int expansions = 0;
};

// A* over plan space from the base plan: solves the assigned goal plus every
// open goal over variables private to the agent, resolves all threats under
// every view, and returns up to k refinement steps. close_all makes it close
// every open goal (single-agent solution enumeration).
RefineResult refine(const PartialPlan& base, const OpenGoal& goal, AgentId agent,
                    const MapTask& task, const Rpg& rpg,
                    const SearchBudget& budget, double unknown_penalty,
                    bool close_all = false);

struct ComposeResult {
    std::optional<PartialPlan> plan;
    std::string error;  // set iff composition is inconsistent
};

// base composed with a refinement step; verifies acyclicity, single support,
// producer entailment, zero threats under every view and mutual consistency
// of supported preconditions of unordered steps.
ComposeResult compose(const PartialPlan& base, const RefinementStep& step,
                      const MapTask& task);

}  // namespace mappop
