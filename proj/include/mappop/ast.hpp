#pragma once

#include <string>
#include <vector>

namespace mappop {

// Abstract syntax for the three task-definition file kinds. Everything is
// kept as written (names, not ids); grounding resolves names later.

struct TypedName {
    std::string name;
    std::string type;
    bool operator==(const TypedName&) const = default;
};

// A state-variable schema: name, typed parameters and the type of the value
// the variable ranges over, e.g. (at ?v - vehicle - location).
struct VarSchema {
    std::string name;
    std::vector<TypedName> params;
    std::string value_type;
    bool operator==(const VarSchema&) const = default;
};

// A variable term as it appears in conditions/effects: (at ?v) or (at truck1).
// Args may be parameters (leading '?') or object names.
struct TermAst {
    std::string var;
    std::vector<std::string> args;
    bool operator==(const TermAst&) const = default;
};

// (= term value) or, when negated, (!= term value).
struct FormulaAst {
    TermAst term;
    std::string value;  // parameter or object name
    bool negated = false;
    bool operator==(const FormulaAst&) const = default;
};

// Static parameter inequality (!= ?a ?b); pruned at grounding time.
struct InequalityAst {
    std::string lhs;
    std::string rhs;
    bool operator==(const InequalityAst&) const = default;
};

// (assign term value) or (unassign term value).
struct EffectAst {
    TermAst term;
    std::string value;
    bool unassign = false;
    bool operator==(const EffectAst&) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<FormulaAst> pre;
    std::vector<InequalityAst> constraints;
    std::vector<EffectAst> eff;
    bool operator==(const ActionSchema&) const = default;
};

struct DomainAst {
    std::string name;
    std::vector<TypedName> types;  // name - parent (parent "object" at the root)
    std::vector<VarSchema> variables;
    std::vector<ActionSchema> actions;
    bool operator==(const DomainAst&) const = default;
};

struct ProblemAst {
    std::string name;  // doubles as the agent name
    std::vector<TypedName> objects;
    std::vector<FormulaAst> init;  // positive ground assignments only
    std::vector<FormulaAst> goal;
    bool operator==(const ProblemAst&) const = default;
};

struct SharedGrantAst {
    std::string agent;
    std::vector<std::string> values;
    bool operator==(const SharedGrantAst&) const = default;
};

// ((var argpat*) :with (agent :values (...))*). Arg patterns are object
// names or the wildcard "*".
struct SharedEntryAst {
    TermAst pattern;
    std::vector<SharedGrantAst> grants;
    bool operator==(const SharedEntryAst&) const = default;
};

struct SharedDataAst {
    std::vector<SharedEntryAst> entries;
    bool operator==(const SharedDataAst&) const = default;
};

std::string print_domain(const DomainAst& d);
std::string print_problem(const ProblemAst& p);
std::string print_shared_data(const SharedDataAst& s);

}  // namespace mappop
