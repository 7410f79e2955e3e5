#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mappop/ast.hpp"
#include "mappop/sexpr.hpp"

namespace mappop {

// Semantic error (undeclared object/type/agent, duplicate init, ...) carrying
// the offending token.
struct SemanticError : std::runtime_error {
    SemanticError(const std::string& msg, const std::string& token)
        : std::runtime_error(msg + ": '" + token + "'"), token(token) {}
    std::string token;
};

DomainAst parse_domain(const std::string& text);
ProblemAst parse_problem(const std::string& text);
SharedDataAst parse_shared_data(const std::string& text);

struct AgentInput {
    std::string problem_text;
    std::optional<std::string> shared_data_text;
};

struct ParsedTask {
    DomainAst domain;
    std::vector<ProblemAst> problems;       // one per agent, order given
    std::vector<SharedDataAst> shared;      // parallel to problems (maybe empty decl)
};

// Parses and cross-validates the full file set. Agent names are the problem
// names; shared-data grants must reference declared agents.
ParsedTask parse_task(const std::string& domain_text,
                      const std::vector<AgentInput>& agents);

}  // namespace mappop
