#include "mappop/coordinator.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <limits>

namespace mappop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PoolEntry {
    PartialPlan plan;
    std::vector<double> evals;  // F per agent view
};

double goal_cost(const Formula& g, AgentId agent, const Rpg& rpg,
                 const MapTask& task, double penalty) {
    if (task.visibility(agent, g.var, g.value) != Visibility::Full)
        return penalty;
    int c = rpg.cost(fluent_of(g));
    return c < 0 ? kInf : static_cast<double>(c);
}

}  // namespace

bool check_solution(const PartialPlan& plan, const MapTask& task) {
    for (AgentId a = 0; a < task.agent_count(); ++a)
        if (!project_plan(plan, a, task).open.empty())
            return false;
    return true;
}

std::optional<OpenGoal> select_open_goal(const PartialPlan& plan, AgentId agent,
                                         const Rpg& rpg, const MapTask& task,
                                         double unknown_penalty) {
    std::optional<OpenGoal> best;
    double best_cost = -1;
    for (const OpenGoal& g : plan.open) {
        if (!task.sees_var(agent, g.formula.var))
            continue;
        double c = goal_cost(g.formula, agent, rpg, task, unknown_penalty);
        bool better = false;
        if (!best) {
            better = true;
        } else if (c != best_cost) {
            better = c > best_cost;
        } else {
            better = std::tie(g.formula, g.step) <
                     std::tie(best->formula, best->step);
        }
        if (better) {
            best = g;
            best_cost = c;
        }
    }
    return best;
}

SolveResult solve(const MapTask& task, const std::vector<Rpg>& rpgs, Bus& bus,
                  const SolveConfig& config) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto timed_out = [&] {
        return std::chrono::duration<double>(clock::now() - t0).count() >
               config.timeout_seconds;
    };

    const int n = task.agent_count();
    SolveResult result;

    // Relaxed reachability gate: a goal no agent can reach has no plan.
    for (const Formula& g : task.all_goals) {
        bool reachable = false;
        for (AgentId a = 0; a < n && !reachable; ++a)
            if (task.sees_var(a, g.var) && rpgs[a].contains(fluent_of(g)))
                reachable = true;
        if (!reachable) {
            result.outcome = Outcome::Unsolvable;
            result.reason = "goal unreachable in every dis-RPG: " +
                            task.formula_name(g);
            return result;
        }
    }

    PartialPlan base = make_initial_plan(task);
    if (check_solution(base, task)) {
        result.outcome = Outcome::Solution;
        result.plan = std::move(base);
        return result;
    }

    BatonSchedule baton{n};
    std::map<std::string, PoolEntry> pool;
    std::set<std::string> expanded{base.signature};

    for (int iter = 0; iter < config.iteration_cap; ++iter) {
        result.stats.iterations = iter + 1;
        if (timed_out()) {
            result.outcome = Outcome::BudgetExhausted;
            result.reason = "timeout";
            return result;
        }

        // The baton passes from the scheduled holder until an agent that
        // sees an open goal of the current base plan is found.
        AgentId selector = -1;
        std::optional<OpenGoal> goal;
        for (int off = 0; off < n; ++off) {
            AgentId a = (baton.holder(iter) + off) % n;
            goal = select_open_goal(base, a, rpgs[a], task,
                                    config.unknown_penalty);
            if (goal) {
                selector = a;
                break;
            }
        }
        if (!goal) {  // every view is empty: base is a solution
            result.outcome = Outcome::Solution;
            result.plan = std::move(base);
            return result;
        }

        {
            std::vector<std::vector<Message>> out(n);
            for (AgentId j = 0; j < n; ++j)
                if (j != selector)
                    out[selector].push_back(Message{
                        selector, j, -1,
                        GoalSelection{goal->step, goal->formula, base.signature}});
            bus.broadcast_round(std::move(out));
        }

        // Individual refinement by every agent that sees the goal variable.
        std::vector<AgentId> eligible;
        for (AgentId a = 0; a < n; ++a)
            if (task.sees_var(a, goal->formula.var))
                eligible.push_back(a);

        std::vector<RefineResult> refined(eligible.size());
        SearchBudget budget{config.node_budget, config.k, -1};
        auto run = [&](size_t idx) {
            refined[idx] = refine(base, *goal, eligible[idx], task,
                                  rpgs[eligible[idx]], budget,
                                  config.unknown_penalty);
        };
        if (config.parallel) {
            std::vector<std::future<void>> futs;
            for (size_t i = 0; i < eligible.size(); ++i)
                futs.push_back(std::async(std::launch::async, run, i));
            for (auto& f : futs)
                f.get();
        } else {
            for (size_t i = 0; i < eligible.size(); ++i)
                run(i);
        }

        {
            std::vector<std::vector<Message>> out(n);
            for (size_t i = 0; i < eligible.size(); ++i) {
                RefinementBatch batch{base.signature, refined[i].steps};
                for (AgentId j = 0; j < n; ++j)
                    if (j != eligible[i])
                        out[eligible[i]].push_back(
                            Message{eligible[i], j, -1, batch});
            }
            bus.broadcast_round(std::move(out));
        }

        // Union of proposals: compose with the base, evaluate per view.
        for (size_t i = 0; i < eligible.size(); ++i) {
            result.stats.refine_expansions += refined[i].expansions;
            for (const RefinementStep& step : refined[i].steps) {
                ComposeResult composed = compose(base, step, task);
                if (!composed.plan)
                    continue;  // proposals are self-checked; stay safe anyway
                const std::string& sig = composed.plan->signature;
                if (expanded.count(sig) || pool.count(sig))
                    continue;
                PoolEntry entry;
                entry.plan = std::move(*composed.plan);
                for (AgentId a = 0; a < n; ++a)
                    entry.evals.push_back(heuristic_value(
                        entry.plan, a, rpgs[a], task, config.unknown_penalty));
                pool.emplace(sig, std::move(entry));
            }
        }
        result.stats.pool_peak =
            std::max(result.stats.pool_peak, static_cast<int>(pool.size()));

        if (pool.empty()) {
            result.outcome = Outcome::Unsolvable;
            result.reason = "no refinements remain (every candidate pruned)";
            return result;
        }

        // Voting: each agent backs its best-valued pool entry; plurality
        // wins; the baton agent breaks draws.
        std::vector<std::string> vote_of(n);
        for (AgentId a = 0; a < n; ++a) {
            const std::string* best_sig = nullptr;
            double best_val = kInf;
            for (const auto& [sig, entry] : pool) {
                double v = entry.evals[a];
                if (!best_sig || v < best_val ||
                    (v == best_val && sig < *best_sig)) {
                    best_sig = &sig;
                    best_val = v;
                }
            }
            vote_of[a] = *best_sig;
        }
        {
            std::vector<std::vector<Message>> out(n);
            for (AgentId a = 0; a < n; ++a)
                for (AgentId j = 0; j < n; ++j)
                    if (j != a)
                        out[a].push_back(Message{a, j, -1, Vote{vote_of[a]}});
            bus.broadcast_round(std::move(out));
        }
        std::map<std::string, int> tally;
        for (AgentId a = 0; a < n; ++a)
            ++tally[vote_of[a]];
        int most = 0;
        for (const auto& [sig, cnt] : tally)
            most = std::max(most, cnt);
        const std::string* adopted_sig = nullptr;
        double adopted_val = kInf;
        for (const auto& [sig, cnt] : tally) {
            if (cnt != most)
                continue;
            double v = pool.at(sig).evals[selector];
            if (!adopted_sig || v < adopted_val ||
                (v == adopted_val && sig < *adopted_sig)) {
                adopted_sig = &sig;
                adopted_val = v;
            }
        }

        {
            std::vector<std::vector<Message>> out(n);
            for (AgentId j = 0; j < n; ++j)
                if (j != selector)
                    out[selector].push_back(
                        Message{selector, j, -1, BatonPass{*adopted_sig}});
            bus.broadcast_round(std::move(out));
        }

        auto it = pool.find(*adopted_sig);
        base = std::move(it->second.plan);
        pool.erase(it);
        expanded.insert(base.signature);

        if (check_solution(base, task)) {
            result.outcome = Outcome::Solution;
            result.plan = std::move(base);
            return result;
        }
    }
    result.outcome = Outcome::BudgetExhausted;
    result.reason = "iteration cap reached";
    return result;
}

}  // namespace mappop
