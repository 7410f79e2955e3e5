#include "mappop/plan.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace mappop {

int PartialPlan::action_count() const {
    int n = 0;
    for (const auto& s : steps)
        if (!s.synthetic())
            ++n;
    return n;
}

std::vector<Formula> step_preconditions(const PartialPlan& plan, int step,
                                        const MapTask& task) {
    const PlanStep& s = plan.steps[step];
    if (s.action == kInitAction)
        return {};
    if (s.action == kGoalAction)
        return task.all_goals;
    return task.actions[s.action].pre;
}

namespace {

void compute_closure(PartialPlan& p) {
    size_t n = p.steps.size();
    p.closure.assign(n * n, 0);
    for (auto& [a, b] : p.orderings)
        p.closure[static_cast<size_t>(a) * n + b] = 1;
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i) {
            if (!p.closure[i * n + k])
                continue;
            for (size_t j = 0; j < n; ++j)
                if (p.closure[k * n + j])
                    p.closure[i * n + j] = 1;
        }
}

bool cyclic(const PartialPlan& p) {
    for (int i = 0; i < p.step_count(); ++i)
        if (p.before(i, i))
            return true;
    return false;
}

// Canonical signature: steps relabeled by (action signature, author), stable
// on equal keys, so structurally identical plans built in different id orders
// print the same.
std::string compute_signature(const PartialPlan& p, const MapTask& task) {
    int n = p.step_count();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int s) -> std::pair<std::string, int> {
        const PlanStep& st = p.steps[s];
        if (st.action == kInitAction)
            return {"\x01", -1};
        if (st.action == kGoalAction)
            return {"\x02", -1};
        return {task.actions[st.action].signature, st.author};
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return key(a) < key(b); });
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i)
        rank[order[i]] = i;

    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
        int s = order[i];
        const PlanStep& st = p.steps[s];
        if (st.action == kInitAction)
            os << i << ":<init>;";
        else if (st.action == kGoalAction)
            os << i << ":<goal>;";
        else
            os << i << ':' << task.actions[st.action].signature << '@'
               << task.agents[st.author] << ';';
    }
    std::vector<std::pair<int, int>> ord;
    for (auto& [a, b] : p.orderings)
        ord.emplace_back(rank[a], rank[b]);
    std::sort(ord.begin(), ord.end());
    os << '|';
    for (auto& [a, b] : ord)
        os << a << '<' << b << ';';
    std::vector<std::string> ls;
    for (const auto& l : p.links) {
        std::ostringstream s;
        s << rank[l.producer] << "->" << rank[l.consumer] << ':'
          << task.fluent_name(l.fluent);
        ls.push_back(s.str());
    }
    std::sort(ls.begin(), ls.end());
    os << '|';
    for (const auto& s : ls)
        os << s << ';';
    std::vector<std::string> og;
    for (const auto& g : p.open) {
        std::ostringstream s;
        s << rank[g.step] << '?' << task.formula_name(g.formula);
        og.push_back(s.str());
    }
    std::sort(og.begin(), og.end());
    os << '|';
    for (const auto& s : og)
        os << s << ';';
    return os.str();
}

}  // namespace

PartialPlan make_initial_plan(const MapTask& task) {
    PartialPlan p;
    p.steps.push_back({kInitAction, kNoAgent});
    p.steps.push_back({kGoalAction, kNoAgent});
    p.orderings.emplace_back(kInitStep, kGoalStep);
    for (const Formula& g : task.all_goals)
        p.open.push_back({kGoalStep, g});
    std::sort(p.open.begin(), p.open.end());
    compute_closure(p);
    p.signature = compute_signature(p, task);
    return p;
}

int PlanBuilder::add_step(ActionId action, AgentId author) {
    int id = plan_.step_count();
    plan_.steps.push_back({action, author});
    plan_.orderings.emplace_back(kInitStep, id);
    plan_.orderings.emplace_back(id, kGoalStep);
    return id;
}

void PlanBuilder::add_ordering(int before, int after) {
    plan_.orderings.emplace_back(before, after);
}

void PlanBuilder::add_link(const CausalLink& link) {
    plan_.links.push_back(link);
    plan_.orderings.emplace_back(link.producer, link.consumer);
}

bool PlanBuilder::finalize(const MapTask& task, PartialPlan& out) {
    std::sort(plan_.orderings.begin(), plan_.orderings.end());
    plan_.orderings.erase(
        std::unique(plan_.orderings.begin(), plan_.orderings.end()),
        plan_.orderings.end());
    std::sort(plan_.links.begin(), plan_.links.end());
    plan_.links.erase(std::unique(plan_.links.begin(), plan_.links.end()),
                      plan_.links.end());
    compute_closure(plan_);
    if (cyclic(plan_))
        return false;
    // Recompute open goals; each precondition may have at most one link.
    plan_.open.clear();
    for (int s = 0; s < plan_.step_count(); ++s) {
        if (s == kInitStep)
            continue;
        for (const Formula& pre : step_preconditions(plan_, s, task)) {
            Fluent want = fluent_of(pre);
            int supports = 0;
            for (const auto& l : plan_.links)
                if (l.consumer == s && l.fluent == want)
                    ++supports;
            if (supports > 1)
                return false;
            if (supports == 0)
                plan_.open.push_back({s, pre});
        }
    }
    std::sort(plan_.open.begin(), plan_.open.end());
    plan_.signature = compute_signature(plan_, task);
    out = std::move(plan_);
    return true;
}

bool step_entails(const PartialPlan& plan, int step, const Fluent& f,
                  const MapTask& task) {
    const PlanStep& s = plan.steps[step];
    if (s.action == kGoalAction)
        return false;
    if (s.action == kInitAction)
        return task.true_init.contains(f);
    for (const EffectAtom& e : task.actions[s.action].eff) {
        if (e.var != f.var)
            continue;
        if (!e.unassign) {
            if (!f.negated && e.value == f.value)
                return true;
            if (f.negated && e.value != f.value)
                return true;
        } else {
            if (f.negated && e.value == f.value)
                return true;
        }
    }
    return false;
}

std::string plan_to_string(const PartialPlan& plan, const MapTask& task) {
    std::ostringstream os;
    for (int i = 0; i < plan.step_count(); ++i) {
        const PlanStep& s = plan.steps[i];
        os << i << ": ";
        if (s.action == kInitAction)
            os << "<init>";
        else if (s.action == kGoalAction)
            os << "<goal>";
        else
            os << task.agents[s.author] << ' ' << task.actions[s.action].signature;
        os << '\n';
    }
    for (auto& [a, b] : plan.orderings)
        os << "  " << a << " < " << b << '\n';
    for (const auto& l : plan.links)
        os << "  " << l.producer << " -> " << l.consumer << " : "
           << task.fluent_name(l.fluent) << '\n';
    for (const auto& g : plan.open)
        os << "  open " << g.step << " : " << task.formula_name(g.formula) << '\n';
    return os.str();
}

}  // namespace mappop
