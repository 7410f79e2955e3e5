#include "mappop/plan_io.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "mappop/sexpr.hpp"
#include "mappop/validator.hpp"

namespace mappop {

std::string write_plan(const PartialPlan& plan, const MapTask& task,
                       const std::string& problem_name) {
    std::ostringstream os;
    os << "; plan " << problem_name << '\n';
    std::vector<int> level = chain_levels(plan, task);
    Metrics m = plan_metrics(plan, task);
    for (int t = 1; t <= m.time_steps; ++t) {
        std::vector<int> at_level;
        for (int s = 0; s < plan.step_count(); ++s)
            if (!plan.steps[s].synthetic() && level[s] == t)
                at_level.push_back(s);
        std::sort(at_level.begin(), at_level.end(), [&](int a, int b) {
            const PlanStep& sa = plan.steps[a];
            const PlanStep& sb = plan.steps[b];
            return std::tie(sa.author, task.actions[sa.action].signature, a) <
                   std::tie(sb.author, task.actions[sb.action].signature, b);
        });
        os << (t - 1) << ": ";
        for (size_t i = 0; i < at_level.size(); ++i) {
            const PlanStep& s = plan.steps[at_level[i]];
            os << (i ? ", " : "") << task.agents[s.author] << ' '
               << task.actions[s.action].signature;
        }
        os << '\n';
    }
    os << "; acts=" << m.acts << " ts=" << m.time_steps
       << " partics=" << m.participants << '\n';
    return os.str();
}

PartialPlan read_plan(const std::string& text, const MapTask& task) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_header = false;

    std::map<std::string, ActionId> by_signature;
    for (size_t i = 0; i < task.actions.size(); ++i)
        by_signature[task.actions[i].signature] = static_cast<ActionId>(i);

    struct FileStep {
        int level;
        AgentId author;
        ActionId action;
    };
    std::vector<FileStep> file_steps;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        if (line[0] == ';') {
            if (!saw_header) {
                if (line.rfind("; plan ", 0) != 0)
                    throw ParseError("expected '; plan <problem>' header", lineno, 1);
                saw_header = true;
            }
            continue;  // footer or comments
        }
        auto colon = line.find(": ");
        if (colon == std::string::npos)
            throw ParseError("expected 't: agent action(...)'", lineno, 1);
        int t = std::stoi(line.substr(0, colon));
        std::string rest = line.substr(colon + 2);
        size_t pos = 0;
        while (pos < rest.size()) {
            size_t next = rest.find(", ", pos);
            std::string entry = rest.substr(
                pos, next == std::string::npos ? std::string::npos : next - pos);
            auto space = entry.find(' ');
            if (space == std::string::npos)
                throw ParseError("expected 'agent action(...)'", lineno,
                                 static_cast<int>(pos + 1));
            std::string agent = entry.substr(0, space);
            std::string sig = entry.substr(space + 1);
            AgentId a = task.agent_id(agent);
            if (a < 0)
                throw SemanticError("unknown agent in plan file", agent);
            auto it = by_signature.find(sig);
            if (it == by_signature.end())
                throw SemanticError("unknown action in plan file", sig);
            const auto& owners = task.actions[it->second].owners;
            if (!std::binary_search(owners.begin(), owners.end(), a))
                throw SemanticError("agent does not own action " + sig, agent);
            file_steps.push_back({t, a, it->second});
            if (next == std::string::npos)
                break;
            pos = next + 2;
        }
    }
    if (!saw_header)
        throw ParseError("missing '; plan <problem>' header", lineno, 1);

    PlanBuilder b(make_initial_plan(task));
    std::vector<int> ids;
    for (const FileStep& fs : file_steps)
        ids.push_back(b.add_step(fs.action, fs.author));
    // The printed levels induce the ordering relation.
    for (size_t i = 0; i < file_steps.size(); ++i)
        for (size_t j = 0; j < file_steps.size(); ++j)
            if (file_steps[i].level < file_steps[j].level)
                b.add_ordering(ids[i], ids[j]);

    PartialPlan skeleton;
    if (!b.finalize(task, skeleton))
        throw SemanticError("plan file induces an inconsistent ordering", "plan");

    // Infer causal links: latest entailing producer (max level, then lowest
    // id); a0 has level -1.
    auto level_of = [&](int step) {
        if (step == kInitStep)
            return -1;
        for (size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == step)
                return file_steps[i].level;
        return -1;
    };
    PlanBuilder lb(skeleton);
    for (int s = 0; s < skeleton.step_count(); ++s) {
        if (s == kInitStep)
            continue;
        int s_level = (s == kGoalStep) ? std::numeric_limits<int>::max()
                                       : level_of(s);
        for (const Formula& pre : step_preconditions(skeleton, s, task)) {
            Fluent want = fluent_of(pre);
            int best = -1;
            int best_level = -2;
            for (int t = 0; t < skeleton.step_count(); ++t) {
                if (t == s || t == kGoalStep)
                    continue;
                int t_level = level_of(t);
                if (t_level >= s_level)
                    continue;
                if (!step_entails(skeleton, t, want, task))
                    continue;
                if (t_level > best_level ||
                    (t_level == best_level && t < best)) {
                    best = t;
                    best_level = t_level;
                }
            }
            if (best >= 0)
                lb.add_link({best, s, want});
        }
    }
    PartialPlan out;
    if (!lb.finalize(task, out))
        throw SemanticError("plan file induces inconsistent causal structure",
                            "plan");
    return out;
}

}  // namespace mappop
