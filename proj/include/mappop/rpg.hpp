#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mappop/bus.hpp"
#include "mappop/task.hpp"

namespace mappop {

// One agent's relaxed planning graph: best-known cost (first reachable
// level, unit action costs) and achiever agents per fluent, plus the first
// level each action became applicable.
struct Rpg {
    struct Entry {
        int cost = 0;
        std::vector<AgentId> achievers;  // sorted
    };
    std::map<Fluent, Entry> fluents;
    std::map<ActionId, int> action_level;
    // Fluents inserted, lowered or relabeled since the last exchange.
    std::set<Fluent> dirty;

    bool contains(const Fluent& f) const { return fluents.count(f) != 0; }
    int cost(const Fluent& f) const;  // -1 if absent
};

// Level 0 is the agent's initial state; expansion runs to fixpoint with
// delete effects ignored.
Rpg build_initial_rpg(const MapTask& task, AgentId agent);

// Relaxation fixpoint over the agent's actions: applicability level is the
// max precondition cost; produced fluents cost one more. assign(v,d) also
// produces <v,not d'> for the other values the agent sees. Returns true if
// anything changed.
bool expand_rpg(Rpg& rpg, const MapTask& task, AgentId agent);

// The subset of `fresh` shareable from i to j: full visibility on both sides.
FluentBatch shareable(const MapTask& task, AgentId from, AgentId to,
                      const Rpg& rpg, const std::set<Fluent>& fresh);

// Best-cost retention: insert new fluents, lower known costs, union achiever
// labels. Changed fluents are marked dirty for the next exchange.
bool merge_received(Rpg& rpg, const FluentBatch& batch);

// Iterated exchange until no agent has anything new to share.
std::vector<Rpg> build_dis_rpg(const MapTask& task, Bus& bus,
                               bool parallel = false);

// One line per fluent "name cost achievers...", sorted by name.
std::string dump_rpg(const Rpg& rpg, const MapTask& task);

}  // namespace mappop
