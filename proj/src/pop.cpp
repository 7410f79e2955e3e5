#include "mappop/pop.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace mappop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Conflict between a step's effect on the link's variable and the link's
// fluent, both as seen by the viewing agent. `hidden` means the effect's
// value is outside the viewer's domain view (so its polarity is unknowable
// too: projected effects are fluents). A hidden value never equals a visible
// one, which settles most cases.
bool effect_conflicts(bool hidden, bool unassign, ObjId value,
                      const Fluent& link_fluent) {
    bool link_hidden = link_fluent.value == kBottom;
    if (hidden) {
        if (link_hidden)
            return true;  // bottom vs bottom: conservative
        // Could be an assign of some other value: falsifies a positive link,
        // can never falsify <v,not d1> since the hidden value differs from d1.
        return !link_fluent.negated;
    }
    if (!unassign) {
        if (link_hidden)
            return true;  // the hidden link value differs from this assign's
        return link_fluent.negated ? value == link_fluent.value
                                   : value != link_fluent.value;
    }
    // unassign(v,value) falsifies exactly <v,value>.
    if (link_hidden)
        return false;
    return !link_fluent.negated && value == link_fluent.value;
}

Fluent viewed_link_fluent(const CausalLink& l, AgentId viewer,
                          const MapTask& task) {
    if (task.visibility(viewer, l.fluent.var, l.fluent.value) == Visibility::Full)
        return l.fluent;
    return Fluent{l.fluent.var, kBottom, false};
}

// Entailment as the agent can establish it: the producing value must be
// fully visible to the agent.
bool viewer_entails(const PartialPlan& plan, int step, const Fluent& f,
                    AgentId agent, const MapTask& task) {
    const PlanStep& s = plan.steps[step];
    if (s.action == kGoalAction)
        return false;
    if (s.action == kInitAction)
        return task.true_init.contains(f) &&
               task.visibility(agent, f.var, f.value) == Visibility::Full;
    for (const EffectAtom& e : task.actions[s.action].eff) {
        if (e.var != f.var)
            continue;
        if (!task.sees_value(agent, e.var, e.value))
            continue;
        if (!e.unassign) {
            if (!f.negated && e.value == f.value)
                return true;
            if (f.negated && e.value != f.value)
                return true;
        } else if (f.negated && e.value == f.value) {
            return true;
        }
    }
    return false;
}

// Unordered steps whose supported preconditions contradict each other:
// (v,d) vs (v,d') with d != d', or (v,d) vs (v,not d).
struct ConsistencyViolation {
    int step_a = -1;
    int step_b = -1;
};

std::vector<ConsistencyViolation> consistency_violations(const PartialPlan& plan,
                                                         const MapTask& task) {
    std::vector<ConsistencyViolation> out;
    int n = plan.step_count();
    std::vector<uint8_t> fully_supported(n, 1);
    for (const OpenGoal& g : plan.open)
        fully_supported[g.step] = 0;
    for (int a = 0; a < n; ++a) {
        if (plan.steps[a].synthetic() || !fully_supported[a])
            continue;
        for (int b = a + 1; b < n; ++b) {
            if (plan.steps[b].synthetic() || !fully_supported[b])
                continue;
            if (!plan.unordered(a, b))
                continue;
            bool conflict = false;
            for (const Formula& pa : step_preconditions(plan, a, task)) {
                for (const Formula& pb : step_preconditions(plan, b, task)) {
                    if (pa.var != pb.var)
                        continue;
                    if (!pa.negated && !pb.negated && pa.value != pb.value)
                        conflict = true;
                    if (pa.negated != pb.negated && pa.value == pb.value)
                        conflict = true;
                }
            }
            if (conflict)
                out.push_back({a, b});
        }
    }
    return out;
}

}  // namespace

PlanView project_plan(const PartialPlan& plan, AgentId agent,
                      const MapTask& task) {
    PlanView v;
    v.agent = agent;
    for (const OpenGoal& g : plan.open) {
        if (!task.sees_var(agent, g.formula.var))
            continue;
        Formula f = g.formula;
        if (task.visibility(agent, f.var, f.value) != Visibility::Full) {
            f.value = kBottom;
            f.negated = false;
        }
        v.open.push_back({g.step, f});
    }
    for (const CausalLink& l : plan.links) {
        if (!task.sees_var(agent, l.fluent.var))
            continue;
        v.links.push_back({l.producer, l.consumer,
                           viewed_link_fluent(l, agent, task)});
    }
    return v;
}

std::vector<Threat> detect_threats(const PartialPlan& plan, AgentId viewer,
                                   const MapTask& task) {
    std::vector<Threat> out;
    for (const CausalLink& l : plan.links) {
        if (!task.sees_var(viewer, l.fluent.var))
            continue;
        Fluent lf = viewed_link_fluent(l, viewer, task);
        for (int t = 0; t < plan.step_count(); ++t) {
            if (plan.steps[t].synthetic() || t == l.producer || t == l.consumer)
                continue;
            if (plan.before(t, l.producer) || plan.before(l.consumer, t))
                continue;
            for (const EffectAtom& e : task.actions[plan.steps[t].action].eff) {
                if (e.var != l.fluent.var)
                    continue;
                bool hidden = !task.sees_value(viewer, e.var, e.value);
                if (effect_conflicts(hidden, e.unassign, e.value, lf)) {
                    out.push_back({t, l});
                    break;
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Threat> detect_threats_all_views(const PartialPlan& plan,
                                             const MapTask& task) {
    std::set<Threat> uniq;
    for (AgentId a = 0; a < task.agent_count(); ++a)
        for (const Threat& t : detect_threats(plan, a, task))
            uniq.insert(t);
    return std::vector<Threat>(uniq.begin(), uniq.end());
}

std::vector<PartialPlan> resolve_threat(const PartialPlan& plan, const Threat& t,
                                        const MapTask& task) {
    std::vector<PartialPlan> out;
    {
        PlanBuilder b(plan);  // promotion: threat after the consumer
        b.add_ordering(t.link.consumer, t.step);
        PartialPlan child;
        if (b.finalize(task, child))
            out.push_back(std::move(child));
    }
    {
        PlanBuilder b(plan);  // demotion: threat before the producer
        b.add_ordering(t.step, t.link.producer);
        PartialPlan child;
        if (b.finalize(task, child))
            out.push_back(std::move(child));
    }
    return out;
}

double heuristic_value(const PartialPlan& plan, AgentId agent, const Rpg& rpg,
                       const MapTask& task, double unknown_penalty) {
    double sum = 0;
    PlanView view = project_plan(plan, agent, task);
    for (const OpenGoal& g : view.open) {
        if (g.formula.value == kBottom) {
            sum += unknown_penalty;
            continue;
        }
        int c = rpg.cost(fluent_of(g.formula));
        if (c < 0)
            return kInf;
        sum += c;
    }
    sum += static_cast<double>(detect_threats(plan, agent, task).size());
    return sum;
}

namespace {

struct SearchNode {
    double f = 0;
    int acts = 0;
    PartialPlan plan;
};

struct NodeOrder {
    bool operator()(const SearchNode& a, const SearchNode& b) const {
        // std::priority_queue is a max-heap; invert for smallest-first.
        if (a.f != b.f)
            return a.f > b.f;
        if (a.acts != b.acts)
            return a.acts > b.acts;
        return a.plan.signature > b.plan.signature;
    }
};

RefinementStep diff_refinement(const PartialPlan& base, const PartialPlan& node,
                               AgentId proposer) {
    RefinementStep step;
    step.base_signature = base.signature;
    step.proposer = proposer;
    for (size_t i = base.steps.size(); i < node.steps.size(); ++i)
        step.new_steps.push_back(node.steps[i]);
    std::set<std::pair<int, int>> base_ord(base.orderings.begin(),
                                           base.orderings.end());
    for (const auto& o : node.orderings)
        if (!base_ord.count(o))
            step.new_orderings.push_back(o);
    std::set<CausalLink> base_links(base.links.begin(), base.links.end());
    for (const auto& l : node.links)
        if (!base_links.count(l))
            step.new_links.push_back(l);
    return step;
}

}  // namespace

RefineResult refine(const PartialPlan& base, const OpenGoal& goal, AgentId agent,
                    const MapTask& task, const Rpg& rpg,
                    const SearchBudget& budget, double unknown_penalty,
                    bool close_all) {
    if (!task.sees_var(agent, goal.formula.var))
        throw std::logic_error("refine invoked for a goal outside the agent's "
                               "variables: " +
                               task.formula_name(goal.formula));
    RefineResult result;
    // A goal whose value the agent cannot see is one it cannot support.
    if (goal.formula.value != kBottom &&
        task.visibility(agent, goal.formula.var, goal.formula.value) !=
            Visibility::Full)
        return result;

    auto required_open = [&](const PartialPlan& p) {
        std::vector<OpenGoal> out;
        for (const OpenGoal& g : p.open) {
            bool assigned = (g.step == goal.step && g.formula == goal.formula);
            if (close_all || assigned || task.private_to(g.formula.var, agent))
                out.push_back(g);
        }
        return out;
    };

    auto fvalue = [&](const PartialPlan& p) {
        return heuristic_value(p, agent, rpg, task, unknown_penalty) +
               static_cast<double>(p.action_count());
    };

    std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> queue;
    std::set<std::string> visited;
    queue.push({fvalue(base), base.action_count(), base});

    while (!queue.empty()) {
        if (static_cast<int>(result.steps.size()) >= budget.max_plans)
            break;
        SearchNode node = queue.top();
        queue.pop();
        if (!visited.insert(node.plan.signature).second)
            continue;

        std::vector<Threat> threats = detect_threats_all_views(node.plan, task);
        std::vector<OpenGoal> goals = required_open(node.plan);
        std::vector<ConsistencyViolation> violations =
            consistency_violations(node.plan, task);

        if (threats.empty() && goals.empty() && violations.empty()) {
            RefinementStep step = diff_refinement(base, node.plan, agent);
            result.steps.push_back(step);
            result.plans.push_back(std::move(node.plan));
            continue;
        }
        if (result.expansions >= budget.max_expansions)
            break;
        ++result.expansions;

        std::vector<PartialPlan> children;
        if (!threats.empty()) {
            children = resolve_threat(node.plan, threats.front(), task);
        } else if (!violations.empty()) {
            const ConsistencyViolation& v = violations.front();
            for (auto [x, y] : {std::pair{v.step_a, v.step_b},
                                std::pair{v.step_b, v.step_a}}) {
                PlanBuilder b(node.plan);
                b.add_ordering(x, y);
                PartialPlan child;
                if (b.finalize(task, child))
                    children.push_back(std::move(child));
            }
        } else {
            const OpenGoal& g = goals.front();
            Fluent want = fluent_of(g.formula);
            // Link from an existing step.
            for (int t = 0; t < node.plan.step_count(); ++t) {
                if (t == g.step || t == kGoalStep || node.plan.before(g.step, t))
                    continue;
                if (!viewer_entails(node.plan, t, want, agent, task))
                    continue;
                PlanBuilder b(node.plan);
                b.add_link({t, g.step, want});
                PartialPlan child;
                if (b.finalize(task, child))
                    children.push_back(std::move(child));
            }
            // Add a new action of this agent.
            bool may_add = budget.max_steps < 0 ||
                           node.plan.action_count() < budget.max_steps;
            if (may_add) {
                for (ActionId id : task.agent_actions[agent]) {
                    const GroundAction& a = task.actions[id];
                    bool entails = false;
                    for (const EffectAtom& e : a.eff) {
                        if (e.var != want.var)
                            continue;
                        if (!e.unassign && !want.negated && e.value == want.value)
                            entails = true;
                        if (!e.unassign && want.negated && e.value != want.value)
                            entails = true;
                        if (e.unassign && want.negated && e.value == want.value)
                            entails = true;
                    }
                    if (!entails)
                        continue;
                    PlanBuilder b(node.plan);
                    int u = b.add_step(id, agent);
                    b.add_link({u, g.step, want});
                    PartialPlan child;
                    if (b.finalize(task, child))
                        children.push_back(std::move(child));
                }
            }
        }
        for (PartialPlan& child : children) {
            if (visited.count(child.signature))
                continue;
            int acts = child.action_count();
            queue.push({fvalue(child), acts, std::move(child)});
        }
    }
    return result;
}

ComposeResult compose(const PartialPlan& base, const RefinementStep& step,
                      const MapTask& task) {
    PlanBuilder b(base);
    for (const PlanStep& s : step.new_steps) {
        if (s.action < 0 || s.action >= static_cast<ActionId>(task.actions.size()))
            return {std::nullopt, "refinement adds an unknown action"};
        b.add_step(s.action, s.author);
    }
    for (const auto& o : step.new_orderings)
        b.add_ordering(o.first, o.second);
    for (const CausalLink& l : step.new_links)
        b.add_link(l);
    PartialPlan plan;
    if (!b.finalize(task, plan))
        return {std::nullopt, "cyclic ordering or duplicated support"};
    for (const CausalLink& l : plan.links) {
        if (l.producer < 0 || l.producer >= plan.step_count() ||
            l.consumer < 0 || l.consumer >= plan.step_count())
            return {std::nullopt, "link references a missing step"};
        if (!step_entails(plan, l.producer, l.fluent, task))
            return {std::nullopt,
                    "link producer does not entail " + task.fluent_name(l.fluent)};
        bool matches = false;
        for (const Formula& p : step_preconditions(plan, l.consumer, task))
            if (fluent_of(p) == l.fluent)
                matches = true;
        if (!matches)
            return {std::nullopt, "link fluent matches no consumer precondition"};
    }
    if (!detect_threats_all_views(plan, task).empty())
        return {std::nullopt, "composition leaves unresolved threats"};
    if (!consistency_violations(plan, task).empty())
        return {std::nullopt,
                "unordered steps with mutually inconsistent preconditions"};
    return {std::move(plan), ""};
}

}  // namespace mappop
