#pragma once

#include <string>
#include <vector>

#include "mappop/task.hpp"

namespace mappop {

constexpr int kInitStep = 0;  // synthetic a0
constexpr int kGoalStep = 1;  // synthetic a-infinity
constexpr ActionId kInitAction = -1;
constexpr ActionId kGoalAction = -2;
constexpr AgentId kNoAgent = -1;

struct PlanStep {
    ActionId action = kInitAction;
    AgentId author = kNoAgent;  // proposing agent; kNoAgent for synthetics
    bool synthetic() const { return action < 0; }
};

struct CausalLink {
    int producer = -1;
    int consumer = -1;
    Fluent fluent;
    auto operator<=>(const CausalLink&) const = default;
};

struct OpenGoal {
    int step = -1;
    Formula formula;
    auto operator<=>(const OpenGoal&) const = default;
};

// A partial-order plan. Value type; the search copies and extends. Step ids
// are indices into steps, with a0 at 0 and a-infinity at 1. Orderings hold
// every asserted pair (bounds included); closure is derived.
struct PartialPlan {
    std::vector<PlanStep> steps;
    std::vector<std::pair<int, int>> orderings;  // sorted, deduplicated
    std::vector<CausalLink> links;               // sorted
    std::vector<OpenGoal> open;                  // sorted
    std::vector<uint8_t> closure;                // row-major steps x steps
    std::string signature;

    int step_count() const { return static_cast<int>(steps.size()); }
    int action_count() const;  // non-synthetic steps
    bool before(int a, int b) const {
        return closure[static_cast<size_t>(a) * steps.size() + b] != 0;
    }
    bool unordered(int a, int b) const {
        return a != b && !before(a, b) && !before(b, a);
    }
};

// Preconditions of a step: the action's preconditions, or the union of goals
// for a-infinity, or nothing for a0.
std::vector<Formula> step_preconditions(const PartialPlan& plan, int step,
                                        const MapTask& task);

// The empty base plan: a0, a-infinity, every task goal open.
PartialPlan make_initial_plan(const MapTask& task);

// Copy-and-extend construction. finalize() recomputes closure, open goals
// and signature; returns false if the orderings became cyclic or some
// precondition ended up supported by more than one link.
class PlanBuilder {
public:
    explicit PlanBuilder(const PartialPlan& base) : plan_(base) {}

    int add_step(ActionId action, AgentId author);  // adds a0/a-inf bounds edges
    void add_ordering(int before, int after);
    void add_link(const CausalLink& link);

    bool finalize(const MapTask& task, PartialPlan& out);

private:
    PartialPlan plan_;
};

// True iff the step's real effects (or a0's initial fluents) make the fluent
// hold. assign(v,d) entails <v,d> and <v,not d'> for every other domain
// value; unassign(v,d) entails <v,not d>.
bool step_entails(const PartialPlan& plan, int step, const Fluent& f,
                  const MapTask& task);

std::string plan_to_string(const PartialPlan& plan, const MapTask& task);

}  // namespace mappop
