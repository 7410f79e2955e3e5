#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mappop/symbols.hpp"

namespace mappop {

using AgentId = int;
using VarId = int;
using ObjId = int;
using ActionId = int;

// The undefined value an agent sees in place of a value outside its domain
// view. Compares unequal to every object and, conservatively, to itself.
constexpr ObjId kBottom = -1;
constexpr ObjId kNoValue = -2;

enum class Truth { False, Unknown, True };
enum class Visibility { None, Partial, Full };

// <v,d> or <v,not d>; with value kBottom only in the positive form.
struct Fluent {
    VarId var = -1;
    ObjId value = kNoValue;
    bool negated = false;
    auto operator<=>(const Fluent&) const = default;
};

// A condition (v,d) / (v,not d). Authored formulas never carry kBottom;
// projected views may.
struct Formula {
    VarId var = -1;
    ObjId value = kNoValue;
    bool negated = false;
    auto operator<=>(const Formula&) const = default;
};

inline Fluent fluent_of(const Formula& f) { return {f.var, f.value, f.negated}; }
inline Formula formula_of(const Fluent& f) { return {f.var, f.value, f.negated}; }

// assign(v,d) or unassign(v,d).
struct EffectAtom {
    VarId var = -1;
    ObjId value = kNoValue;
    bool unassign = false;
    auto operator<=>(const EffectAtom&) const = default;
};

struct PreconditionUnsatisfied : std::runtime_error {
    PreconditionUnsatisfied(const std::string& what, Formula f)
        : std::runtime_error(what), formula(f) {}
    Formula formula;
};

// A set of fluents keyed by variable: at most one positive non-bottom value,
// an optional bottom marker, and an explicit set of excluded values.
class State {
public:
    struct VarEntry {
        ObjId positive = kNoValue;
        bool bottom = false;
        std::vector<ObjId> negated;  // sorted
    };

    Truth evaluate(const Formula& f) const;
    bool contains(const Fluent& f) const;
    void add(const Fluent& f);     // keeps invariants, removing contradicted fluents
    void remove(const Fluent& f);  // exact fluent removal (no-op if absent)

    std::vector<Fluent> fluents() const;  // canonical order
    const std::map<VarId, VarEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::map<VarId, VarEntry> entries_;
};

struct GroundAction {
    std::string schema;
    std::vector<ObjId> args;
    std::vector<Formula> pre;     // canonical order, deduplicated
    std::vector<EffectAtom> eff;  // canonical order, deduplicated
    std::vector<AgentId> owners;  // sorted
    std::string signature;        // "schema(arg,...)"
};

// The grounded MAP task: agents, variables with per-agent domain views,
// per-agent action sets, initial states and goals.
struct MapTask {
    std::vector<std::string> agents;
    SymbolTable objects;
    SymbolTable variables;
    std::vector<std::vector<ObjId>> domain;  // D_v, sorted per variable
    std::vector<std::vector<uint8_t>> var_known;      // [agent][var]
    std::vector<std::vector<std::vector<ObjId>>> view;  // [agent][var] sorted values
    std::vector<GroundAction> actions;                 // canonical order
    std::vector<std::vector<ActionId>> agent_actions;  // A_i, ascending
    State true_init;                    // merged initial state, negatives materialized
    std::vector<State> init;            // I_i: fully-visible projection of true_init
    std::vector<std::vector<Formula>> goals;  // G_i
    std::vector<Formula> all_goals;           // deduplicated union, canonical order

    int agent_count() const { return static_cast<int>(agents.size()); }
    AgentId agent_id(const std::string& name) const;

    bool sees_var(AgentId a, VarId v) const { return var_known[a][v] != 0; }
    bool sees_value(AgentId a, VarId v, ObjId d) const;
    Visibility visibility(AgentId a, VarId v, ObjId d) const;
    // True iff v is in V_a and in no other agent's variable set.
    bool private_to(VarId v, AgentId a) const;

    std::string fluent_name(const Fluent& f) const;
    std::string formula_name(const Formula& f) const;
};

// Tri-state formula evaluation against a state.
Truth evaluate(const Formula& f, const State& s);

// Applies an action under full information. Throws PreconditionUnsatisfied
// if some precondition is not true. assign(v,d) materializes <v,not d'> for
// every other d' in D_v.
State apply(const State& s, const GroundAction& a, const MapTask& task);

// Visibility projection of a single fluent: unchanged under full visibility,
// <v,bottom> under partial visibility, nullopt when v is unknown to the agent.
std::optional<Fluent> project_fluent(const Fluent& f, AgentId agent,
                                     const MapTask& task);

}  // namespace mappop
