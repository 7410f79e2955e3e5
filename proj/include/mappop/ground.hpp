#pragma once

#include <map>
#include <string>
#include <vector>

#include "mappop/ast.hpp"
#include "mappop/parser.hpp"
#include "mappop/task.hpp"

namespace mappop {

// Result of grounding one agent's schemas over its own objects. Names, not
// ids: the global tables only exist once all agents are assembled.
struct AgentGrounding {
    // "schema(a,b)" -> sorted value names the agent itself can see.
    std::map<std::string, std::vector<std::string>> variables;
    struct Action {
        std::string signature;
        std::vector<std::string> args;
        std::string schema;
        std::vector<FormulaAst> pre;  // ground: args/values are object names
        std::vector<EffectAst> eff;
    };
    std::vector<Action> actions;  // canonical order (schema, args)
};

// Exhaustive typed grounding of one agent's view: every schema instantiated
// over the agent's declared objects, static inequality constraints applied,
// duplicates removed.
AgentGrounding ground_agent(const DomainAst& domain, const ProblemAst& problem);

// Builds the full task: per-agent groundings, visibility tables (own views
// plus shared-data grants), merged/projected initial states, goals.
MapTask build_task(const ParsedTask& parsed);

}  // namespace mappop
