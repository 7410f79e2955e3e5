#include "mappop/rpg.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace mappop {

namespace {

// Returns true if the label set grew.
bool union_achievers(std::vector<AgentId>& into, const std::vector<AgentId>& from) {
    bool grew = false;
    for (AgentId a : from) {
        auto it = std::lower_bound(into.begin(), into.end(), a);
        if (it == into.end() || *it != a) {
            into.insert(it, a);
            grew = true;
        }
    }
    return grew;
}

bool record(Rpg& rpg, const Fluent& f, int cost,
            const std::vector<AgentId>& achievers) {
    auto it = rpg.fluents.find(f);
    bool changed = false;
    if (it == rpg.fluents.end()) {
        rpg.fluents.emplace(f, Rpg::Entry{cost, achievers});
        changed = true;
    } else {
        if (cost < it->second.cost) {
            it->second.cost = cost;
            changed = true;
        }
        if (union_achievers(it->second.achievers, achievers))
            changed = true;
    }
    if (changed)
        rpg.dirty.insert(f);
    return changed;
}

}  // namespace

int Rpg::cost(const Fluent& f) const {
    auto it = fluents.find(f);
    return it == fluents.end() ? -1 : it->second.cost;
}

bool expand_rpg(Rpg& rpg, const MapTask& task, AgentId agent) {
    bool any = false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (ActionId id : task.agent_actions[agent]) {
            const GroundAction& a = task.actions[id];
            int level = 0;
            bool applicable = true;
            for (const Formula& p : a.pre) {
                int c = rpg.cost(fluent_of(p));
                if (c < 0) {
                    applicable = false;
                    break;
                }
                level = std::max(level, c);
            }
            if (!applicable)
                continue;
            auto [it, fresh] = rpg.action_level.emplace(id, level);
            if (!fresh && level < it->second)
                it->second = level;
            std::vector<AgentId> self{agent};
            for (const EffectAtom& e : a.eff) {
                if (e.unassign) {
                    changed |= record(rpg, {e.var, e.value, true}, level + 1, self);
                } else {
                    changed |= record(rpg, {e.var, e.value, false}, level + 1, self);
                    for (ObjId d : task.view[agent][e.var])
                        if (d != e.value)
                            changed |= record(rpg, {e.var, d, true}, level + 1, self);
                }
            }
        }
        any |= changed;
    }
    return any;
}

Rpg build_initial_rpg(const MapTask& task, AgentId agent) {
    Rpg rpg;
    for (const Fluent& f : task.init[agent].fluents())
        record(rpg, f, 0, {agent});
    expand_rpg(rpg, task, agent);
    return rpg;
}

FluentBatch shareable(const MapTask& task, AgentId from, AgentId to,
                      const Rpg& rpg, const std::set<Fluent>& fresh) {
    FluentBatch batch;
    for (const Fluent& f : fresh) {
        if (task.visibility(from, f.var, f.value) != Visibility::Full ||
            task.visibility(to, f.var, f.value) != Visibility::Full)
            continue;
        const Rpg::Entry& e = rpg.fluents.at(f);
        batch.fluents.push_back({f, e.cost, e.achievers});
    }
    return batch;
}

bool merge_received(Rpg& rpg, const FluentBatch& batch) {
    bool changed = false;
    for (const FluentInfo& fi : batch.fluents)
        changed |= record(rpg, fi.fluent, fi.cost, fi.achievers);
    return changed;
}

std::vector<Rpg> build_dis_rpg(const MapTask& task, Bus& bus, bool parallel) {
    int n = task.agent_count();
    std::vector<Rpg> rpgs;
    rpgs.reserve(n);
    for (AgentId a = 0; a < n; ++a)
        rpgs.push_back(build_initial_rpg(task, a));

    for (;;) {
        std::vector<std::vector<Message>> outboxes(n);
        bool any = false;
        for (AgentId i = 0; i < n; ++i) {
            for (AgentId j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                FluentBatch batch = shareable(task, i, j, rpgs[i], rpgs[i].dirty);
                if (batch.fluents.empty())
                    continue;
                any = true;
                outboxes[i].push_back(Message{i, j, -1, std::move(batch)});
            }
        }
        if (!any)
            break;
        for (AgentId i = 0; i < n; ++i)
            rpgs[i].dirty.clear();
        auto inboxes = bus.broadcast_round(std::move(outboxes));

        auto run_agent = [&](AgentId i) {
            for (const Message& m : inboxes[i])
                merge_received(rpgs[i], std::get<FluentBatch>(m.payload));
            expand_rpg(rpgs[i], task, i);
        };
        if (parallel) {
            std::vector<std::future<void>> futs;
            for (AgentId i = 0; i < n; ++i)
                futs.push_back(std::async(std::launch::async, run_agent, i));
            for (auto& f : futs)
                f.get();
        } else {
            for (AgentId i = 0; i < n; ++i)
                run_agent(i);
        }
    }
    for (AgentId i = 0; i < n; ++i)
        rpgs[i].dirty.clear();
    return rpgs;
}

std::string dump_rpg(const Rpg& rpg, const MapTask& task) {
    std::vector<std::string> lines;
    for (const auto& [f, e] : rpg.fluents) {
        std::ostringstream os;
        os << task.fluent_name(f) << ' ' << e.cost;
        for (AgentId a : e.achievers)
            os << ' ' << task.agents[a];
        lines.push_back(os.str());
    }
    std::sort(lines.begin(), lines.end());
    std::ostringstream os;
    for (const auto& l : lines)
        os << l << '\n';
    return os.str();
}

}  // namespace mappop
