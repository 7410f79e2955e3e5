#include "mappop/validator.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace mappop {

namespace {

// Reachability by repeated edge relaxation over the asserted orderings.
// Deliberately not the planner's closure code.
std::vector<uint8_t> ordering_reach(const PartialPlan& plan) {
    size_t n = plan.steps.size();
    std::vector<uint8_t> reach(n * n, 0);
    for (auto& [a, b] : plan.orderings)
        reach[static_cast<size_t>(a) * n + b] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (reach[i * n + j])
                    continue;
                for (size_t k = 0; k < n; ++k)
                    if (reach[i * n + k] && reach[k * n + j]) {
                        reach[i * n + j] = 1;
                        changed = true;
                        break;
                    }
            }
    }
    return reach;
}

struct Reach {
    const std::vector<uint8_t>& r;
    size_t n;
    bool operator()(int a, int b) const {
        return r[static_cast<size_t>(a) * n + b] != 0;
    }
};

// Does this effect atom possibly falsify the protected fluent in some world
// consistent with the viewer's visibility? Values outside the viewer's
// domain view are existentially quantified; a hidden value never equals a
// visible one.
bool may_falsify(const EffectAtom& e, const Fluent& protected_f, AgentId viewer,
                 const MapTask& task) {
    if (e.var != protected_f.var)
        return false;
    bool eff_seen = task.sees_value(viewer, e.var, e.value);
    bool link_seen =
        task.visibility(viewer, protected_f.var, protected_f.value) ==
        Visibility::Full;
    // Enumerate the candidate real pairs.
    for (int eff_kind = 0; eff_kind < 2; ++eff_kind) {     // 0 assign, 1 unassign
        if (eff_seen && (eff_kind == 1) != e.unassign)
            continue;  // kind known when the value is visible
        for (int link_pol = 0; link_pol < 2; ++link_pol) {  // 0 positive, 1 negated
            if (link_seen && (link_pol == 1) != protected_f.negated)
                continue;
            // Value equality between the effect value and the link value:
            // forced unequal when exactly one side is hidden; free when both
            // are hidden; determined when both are visible.
            bool can_equal, can_differ;
            if (eff_seen && link_seen) {
                can_equal = (e.value == protected_f.value);
                can_differ = !can_equal;
            } else if (eff_seen != link_seen) {
                can_equal = false;
                can_differ = true;
            } else {
                can_equal = true;
                can_differ = true;
            }
            if (eff_kind == 0) {  // assign falsifies positive-other and negated-same
                if (link_pol == 0 && can_differ)
                    return true;
                if (link_pol == 1 && can_equal)
                    return true;
            } else {  // unassign falsifies only the same positive value
                if (link_pol == 0 && can_equal)
                    return true;
            }
        }
    }
    return false;
}

std::vector<OpenGoal> unsupported_preconditions(const PartialPlan& plan,
                                                const MapTask& task) {
    std::vector<OpenGoal> open;
    for (int s = 0; s < plan.step_count(); ++s) {
        if (s == kInitStep)
            continue;
        for (const Formula& pre : step_preconditions(plan, s, task)) {
            int count = 0;
            for (const CausalLink& l : plan.links)
                if (l.consumer == s && l.fluent == fluent_of(pre))
                    ++count;
            if (count == 0)
                open.push_back({s, pre});
        }
    }
    return open;
}

std::string step_name(const PartialPlan& plan, int s, const MapTask& task) {
    const PlanStep& st = plan.steps[s];
    if (st.action == kInitAction)
        return "a0";
    if (st.action == kGoalAction)
        return "a-inf";
    return task.actions[st.action].signature + "#" + std::to_string(s);
}

}  // namespace

ValidationReport validate(const PartialPlan& plan, const MapTask& task) {
    ValidationReport report;
    auto reach_matrix = ordering_reach(plan);
    Reach reach{reach_matrix, plan.steps.size()};
    int n = plan.step_count();

    // Rule 1: acyclicity and synthetic bounds.
    for (int s = 0; s < n; ++s)
        if (reach(s, s))
            report.findings.push_back(
                {1, step_name(plan, s, task), "ordering cycle through this step"});
    for (int s = 0; s < n; ++s) {
        if (s != kInitStep && !reach(kInitStep, s))
            report.findings.push_back(
                {1, step_name(plan, s, task), "not ordered after a0"});
        if (s != kGoalStep && !reach(s, kGoalStep))
            report.findings.push_back(
                {1, step_name(plan, s, task), "not ordered before a-inf"});
    }
    if (!report.findings.empty()) {
        report.valid = false;
        report.metrics = plan_metrics(plan, task);
        return report;
    }

    // Rule 2: every precondition supported by exactly one sound causal link.
    for (int s = 0; s < n; ++s) {
        if (s == kInitStep)
            continue;
        for (const Formula& pre : step_preconditions(plan, s, task)) {
            std::vector<const CausalLink*> supports;
            for (const CausalLink& l : plan.links)
                if (l.consumer == s && l.fluent == fluent_of(pre))
                    supports.push_back(&l);
            if (supports.empty()) {
                report.findings.push_back({2, step_name(plan, s, task),
                                           "unsupported precondition " +
                                               task.formula_name(pre)});
                continue;
            }
            if (supports.size() > 1)
                report.findings.push_back({2, step_name(plan, s, task),
                                           "multiply supported precondition " +
                                               task.formula_name(pre)});
            for (const CausalLink* l : supports) {
                if (!reach(l->producer, l->consumer))
                    report.findings.push_back(
                        {2, step_name(plan, s, task),
                         "link producer not ordered before consumer"});
                if (!step_entails(plan, l->producer, l->fluent, task))
                    report.findings.push_back(
                        {2, step_name(plan, l->producer, task),
                         "producer does not achieve " +
                             task.fluent_name(l->fluent)});
            }
        }
    }
    // Stray links supporting nothing.
    for (const CausalLink& l : plan.links) {
        bool matches = false;
        for (const Formula& pre : step_preconditions(plan, l.consumer, task))
            if (fluent_of(pre) == l.fluent)
                matches = true;
        if (!matches)
            report.findings.push_back({2, step_name(plan, l.consumer, task),
                                       "link carries a non-precondition " +
                                           task.fluent_name(l.fluent)});
    }

    // Rule 3: threats under every agent's view.
    for (AgentId viewer = 0; viewer < task.agent_count(); ++viewer) {
        for (const CausalLink& l : plan.links) {
            if (!task.sees_var(viewer, l.fluent.var))
                continue;
            for (int t = 0; t < n; ++t) {
                if (plan.steps[t].synthetic() || t == l.producer ||
                    t == l.consumer)
                    continue;
                if (reach(t, l.producer) || reach(l.consumer, t))
                    continue;
                for (const EffectAtom& e :
                     task.actions[plan.steps[t].action].eff) {
                    if (may_falsify(e, l.fluent, viewer, task)) {
                        report.findings.push_back(
                            {3, step_name(plan, t, task),
                             "threatens link " + task.fluent_name(l.fluent) +
                                 " (" + step_name(plan, l.producer, task) +
                                 " -> " + step_name(plan, l.consumer, task) +
                                 ") in view of " + task.agents[viewer]});
                        break;
                    }
                }
            }
        }
    }

    // Rule 4: unordered steps with all preconditions supported must have
    // mutually consistent preconditions.
    {
        auto open = unsupported_preconditions(plan, task);
        std::vector<uint8_t> supported(n, 1);
        for (const OpenGoal& g : open)
            supported[g.step] = 0;
        for (int a = 0; a < n; ++a) {
            if (plan.steps[a].synthetic() || !supported[a])
                continue;
            for (int b = a + 1; b < n; ++b) {
                if (plan.steps[b].synthetic() || !supported[b])
                    continue;
                if (reach(a, b) || reach(b, a))
                    continue;
                for (const Formula& pa : step_preconditions(plan, a, task))
                    for (const Formula& pb : step_preconditions(plan, b, task)) {
                        bool clash =
                            pa.var == pb.var &&
                            ((!pa.negated && !pb.negated && pa.value != pb.value) ||
                             (pa.negated != pb.negated && pa.value == pb.value));
                        if (clash)
                            report.findings.push_back(
                                {4,
                                 step_name(plan, a, task) + " | " +
                                     step_name(plan, b, task),
                                 "unordered steps need " + task.formula_name(pa) +
                                     " and " + task.formula_name(pb)});
                    }
            }
        }
    }

    // Rule 5: every agent confirms there is no open goal in its view.
    {
        auto open = unsupported_preconditions(plan, task);
        for (AgentId a = 0; a < task.agent_count(); ++a)
            for (const OpenGoal& g : open)
                if (task.sees_var(a, g.formula.var))
                    report.findings.push_back(
                        {5, step_name(plan, g.step, task),
                         "open goal " + task.formula_name(g.formula) +
                             " in view of " + task.agents[a]});
    }

    report.valid = report.findings.empty();
    report.metrics = plan_metrics(plan, task);
    return report;
}

std::vector<int> chain_levels(const PartialPlan& plan, const MapTask& task) {
    (void)task;
    auto reach_matrix = ordering_reach(plan);
    Reach reach{reach_matrix, plan.steps.size()};
    int n = plan.step_count();
    std::vector<int> level(n, 0);
    for (int s = 0; s < n; ++s)
        if (reach(s, s))
            return level;  // cyclic; levels are meaningless
    // Longest-chain fixpoint; converges within n passes on a DAG.
    for (int pass = 0; pass < n; ++pass) {
        bool changed = false;
        for (int s = 0; s < n; ++s) {
            if (plan.steps[s].synthetic())
                continue;
            int best = 0;
            for (int p = 0; p < n; ++p)
                if (!plan.steps[p].synthetic() && reach(p, s))
                    best = std::max(best, level[p]);
            if (best + 1 != level[s]) {
                level[s] = best + 1;
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    return level;
}

Metrics plan_metrics(const PartialPlan& plan, const MapTask& task) {
    Metrics m;
    std::set<AgentId> who;
    for (const PlanStep& s : plan.steps)
        if (!s.synthetic()) {
            ++m.acts;
            who.insert(s.author);
        }
    m.participants = static_cast<int>(who.size());
    for (int l : chain_levels(plan, task))
        m.time_steps = std::max(m.time_steps, l);
    return m;
}

SimulationResult simulate(const PartialPlan& plan, const MapTask& task,
                          unsigned seed, int samples) {
    std::mt19937 rng(seed);
    auto reach_matrix = ordering_reach(plan);
    Reach reach{reach_matrix, plan.steps.size()};
    int n = plan.step_count();

    for (int sample = 0; sample < samples; ++sample) {
        // Random topological order: repeatedly pick among ready steps.
        std::vector<int> order;
        std::vector<uint8_t> done(n, 0);
        std::vector<int> missing(n, 0);
        for (int s = 0; s < n; ++s)
            for (int p = 0; p < n; ++p)
                if (p != s && reach(p, s) )
                    ++missing[s];
        for (int emitted = 0; emitted < n; ++emitted) {
            std::vector<int> ready;
            for (int s = 0; s < n; ++s)
                if (!done[s] && missing[s] == 0)
                    ready.push_back(s);
            if (ready.empty())
                return {false, sample, "ordering relation is cyclic"};
            int pick = ready[rng() % ready.size()];
            done[pick] = 1;
            order.push_back(pick);
            for (int s = 0; s < n; ++s)
                if (!done[s] && reach(pick, s))
                    --missing[s];
        }

        State state = task.true_init;
        for (int s : order) {
            if (plan.steps[s].synthetic())
                continue;
            const GroundAction& a = task.actions[plan.steps[s].action];
            try {
                state = apply(state, a, task);
            } catch (const PreconditionUnsatisfied& e) {
                return {false, sample,
                        "step " + a.signature + " failed: " + e.what()};
            }
        }
        for (const Formula& g : task.all_goals)
            if (state.evaluate(g) != Truth::True)
                return {false, sample,
                        "goal " + task.formula_name(g) + " not reached"};
    }
    return {true, -1, ""};
}

double coupling_level(const MapTask& task) {
    int n = task.agent_count();
    if (n == 0)
        return 0.0;
    double sum = 0;
    for (AgentId i = 0; i < n; ++i) {
        const auto& mine = task.agent_actions[i];
        if (mine.empty())
            continue;
        int pub = 0;
        for (ActionId id : mine) {
            const GroundAction& a = task.actions[id];
            bool is_public = false;
            auto touched_by_other = [&](VarId v) {
                for (AgentId j = 0; j < n; ++j)
                    if (j != i && task.sees_var(j, v))
                        return true;
                return false;
            };
            for (const Formula& p : a.pre)
                if (touched_by_other(p.var))
                    is_public = true;
            for (const EffectAtom& e : a.eff)
                if (touched_by_other(e.var))
                    is_public = true;
            if (is_public)
                ++pub;
        }
        sum += static_cast<double>(pub) / static_cast<double>(mine.size());
    }
    return sum / n * 100.0;
}

std::string report_to_string(const ValidationReport& r) {
    std::ostringstream os;
    os << (r.valid ? "valid" : "invalid") << '\n';
    for (const Finding& f : r.findings)
        os << "  rule " << f.rule << " at " << f.location << ": " << f.description
           << '\n';
    os << "  acts=" << r.metrics.acts << " ts=" << r.metrics.time_steps
       << " partics=" << r.metrics.participants << '\n';
    return os.str();
}

}  // namespace mappop
