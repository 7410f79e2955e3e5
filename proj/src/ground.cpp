#include "mappop/ground.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace mappop {

namespace {

struct TypeTable {
    std::map<std::string, std::string> parent;  // type -> parent ("object" root)

    static TypeTable from(const DomainAst& d) {
        TypeTable t;
        for (const auto& ty : d.types)
            t.parent[ty.name] = ty.type;
        return t;
    }

    bool is_subtype(const std::string& t, const std::string& u) const {
        std::string cur = t;
        for (;;) {
            if (cur == u)
                return true;
            if (cur == "object")
                return false;
            auto it = parent.find(cur);
            cur = (it == parent.end()) ? "object" : it->second;
        }
    }
};

std::string make_var_name(const std::string& schema,
                          const std::vector<std::string>& args) {
    if (args.empty())
        return schema;
    std::string s = schema + "(";
    for (size_t i = 0; i < args.size(); ++i)
        s += (i ? "," : "") + args[i];
    return s + ")";
}

std::string make_action_signature(const std::string& schema,
                                  const std::vector<std::string>& args) {
    std::string s = schema + "(";
    for (size_t i = 0; i < args.size(); ++i)
        s += (i ? "," : "") + args[i];
    return s + ")";
}

const VarSchema* find_schema(const DomainAst& d, const std::string& name) {
    for (const auto& v : d.variables)
        if (v.name == name)
            return &v;
    return nullptr;
}

// Resolves a term against a substitution; returns the ground variable name or
// nullopt if some constant is unknown to this agent or a type check fails.
struct Resolver {
    const DomainAst& domain;
    const TypeTable& types;
    const std::map<std::string, std::string>& object_type;  // agent's objects

    const std::string* type_of(const std::string& obj) const {
        auto it = object_type.find(obj);
        return it == object_type.end() ? nullptr : &it->second;
    }

    std::optional<std::string> ground_term(
        const TermAst& term, const std::map<std::string, std::string>& subst,
        std::vector<std::string>* args_out = nullptr) const {
        const VarSchema* schema = find_schema(domain, term.var);
        if (!schema)
            throw SemanticError("undeclared variable schema", term.var);
        if (term.args.size() != schema->params.size())
            throw SemanticError("wrong arity for variable", term.var);
        std::vector<std::string> args;
        for (size_t i = 0; i < term.args.size(); ++i) {
            std::string obj = term.args[i];
            if (!obj.empty() && obj[0] == '?') {
                auto it = subst.find(obj);
                assert(it != subst.end());
                obj = it->second;
            }
            const std::string* ty = type_of(obj);
            if (!ty || !types.is_subtype(*ty, schema->params[i].type))
                return std::nullopt;
            args.push_back(obj);
        }
        if (args_out)
            *args_out = args;
        return make_var_name(term.var, args);
    }

    std::optional<std::string> ground_value(
        const std::string& value, const std::string& value_type,
        const std::map<std::string, std::string>& subst) const {
        std::string obj = value;
        if (!obj.empty() && obj[0] == '?') {
            auto it = subst.find(obj);
            assert(it != subst.end());
            obj = it->second;
        }
        const std::string* ty = type_of(obj);
        if (!ty || !types.is_subtype(*ty, value_type))
            return std::nullopt;
        return obj;
    }
};

}  // namespace

AgentGrounding ground_agent(const DomainAst& domain, const ProblemAst& problem) {
    TypeTable types = TypeTable::from(domain);
    std::map<std::string, std::string> object_type;
    for (const auto& o : problem.objects)
        object_type[o.name] = o.type;

    // Objects per type, lexicographic.
    auto objects_of = [&](const std::string& ty) {
        std::vector<std::string> out;
        for (const auto& [name, oty] : object_type)
            if (types.is_subtype(oty, ty))
                out.push_back(name);
        return out;
    };

    AgentGrounding g;

    // Variables: every schema instantiated over the agent's objects; the
    // agent's own view of the domain is every object of the value type.
    for (const auto& schema : domain.variables) {
        std::vector<std::string> values = objects_of(schema.value_type);
        std::vector<std::vector<std::string>> pools;
        for (const auto& p : schema.params)
            pools.push_back(objects_of(p.type));
        std::vector<std::string> args(schema.params.size());
        // Recursive enumeration over typed argument tuples.
        auto rec = [&](auto&& self, size_t i) -> void {
            if (i == pools.size()) {
                g.variables[make_var_name(schema.name, args)] = values;
                return;
            }
            for (const auto& obj : pools[i]) {
                args[i] = obj;
                self(self, i + 1);
            }
        };
        bool empty_pool = false;
        for (const auto& p : pools)
            if (p.empty())
                empty_pool = true;
        if (!empty_pool)
            rec(rec, 0);
    }

    Resolver resolver{domain, types, object_type};

    // Actions: exhaustive typed substitution with static inequality pruning.
    std::set<std::string> seen;
    for (const auto& schema : domain.actions) {
        std::vector<std::vector<std::string>> pools;
        for (const auto& p : schema.params)
            pools.push_back(objects_of(p.type));
        std::map<std::string, std::string> subst;
        std::vector<std::string> args(schema.params.size());

        auto instantiate = [&]() {
            for (const auto& c : schema.constraints) {
                auto resolve = [&](const std::string& s) {
                    if (!s.empty() && s[0] == '?')
                        return subst.at(s);
                    return s;
                };
                if (resolve(c.lhs) == resolve(c.rhs))
                    return;
            }
            AgentGrounding::Action act;
            act.schema = schema.name;
            act.args = args;
            act.signature = make_action_signature(schema.name, args);
            for (const auto& f : schema.pre) {
                const VarSchema* vs = find_schema(domain, f.term.var);
                std::vector<std::string> targs;
                auto var = resolver.ground_term(f.term, subst, &targs);
                auto val = resolver.ground_value(f.value, vs->value_type, subst);
                if (!var || !val)
                    return;  // mentions an object this agent does not know
                FormulaAst gf;
                gf.term = {f.term.var, targs};
                gf.value = *val;
                gf.negated = f.negated;
                act.pre.push_back(gf);
            }
            std::map<std::string, std::string> assigned;
            for (const auto& e : schema.eff) {
                const VarSchema* vs = find_schema(domain, e.term.var);
                std::vector<std::string> targs;
                auto var = resolver.ground_term(e.term, subst, &targs);
                auto val = resolver.ground_value(e.value, vs->value_type, subst);
                if (!var || !val)
                    return;
                if (!e.unassign) {
                    auto [it, fresh] = assigned.emplace(*var, *val);
                    if (!fresh && it->second != *val)
                        return;  // two assigns with different values
                }
                EffectAst ge;
                ge.term = {e.term.var, targs};
                ge.value = *val;
                ge.unassign = e.unassign;
                act.eff.push_back(ge);
            }
            // assign+unassign of the same (var,value) is contradictory.
            for (const auto& e : act.eff)
                if (e.unassign) {
                    std::vector<std::string> targs = e.term.args;
                    auto it = assigned.find(make_var_name(e.term.var, targs));
                    if (it != assigned.end() && it->second == e.value)
                        return;
                }
            if (!seen.insert(act.signature).second)
                return;
            g.actions.push_back(std::move(act));
        };

        auto rec = [&](auto&& self, size_t i) -> void {
            if (i == pools.size()) {
                instantiate();
                return;
            }
            for (const auto& obj : pools[i]) {
                args[i] = obj;
                subst[schema.params[i].name] = obj;
                self(self, i + 1);
            }
            subst.erase(schema.params[i].name);
        };
        bool empty_pool = false;
        for (const auto& p : pools)
            if (p.empty())
                empty_pool = true;
        if (!empty_pool || schema.params.empty())
            rec(rec, 0);
    }

    std::sort(g.actions.begin(), g.actions.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(a.schema, a.args) < std::tie(b.schema, b.args);
              });
    return g;
}

MapTask build_task(const ParsedTask& parsed) {
    const DomainAst& domain = parsed.domain;
    TypeTable types = TypeTable::from(domain);
    MapTask task;
    int n = static_cast<int>(parsed.problems.size());
    for (const auto& p : parsed.problems)
        task.agents.push_back(p.name);

    // Object table: names sorted so ids compare like names. Types must agree
    // across declaring agents.
    std::map<std::string, std::string> object_type;
    for (const auto& p : parsed.problems) {
        for (const auto& o : p.objects) {
            auto [it, fresh] = object_type.emplace(o.name, o.type);
            if (!fresh && it->second != o.type)
                throw SemanticError("object declared with two different types",
                                    o.name);
        }
    }
    for (const auto& [name, ty] : object_type)
        task.objects.intern(name);

    // Per-agent own groundings.
    std::vector<AgentGrounding> grounded;
    for (const auto& p : parsed.problems)
        grounded.push_back(ground_agent(domain, p));

    // Global variable table (sorted names).
    {
        std::set<std::string> var_names;
        for (const auto& g : grounded)
            for (const auto& [v, values] : g.variables)
                var_names.insert(v);
        for (const auto& v : var_names)
            task.variables.intern(v);
    }
    int num_vars = task.variables.size();

    task.var_known.assign(n, std::vector<uint8_t>(num_vars, 0));
    task.view.assign(n, std::vector<std::vector<ObjId>>(num_vars));

    auto add_view_value = [&](AgentId a, VarId v, ObjId d) {
        auto& xs = task.view[a][v];
        auto it = std::lower_bound(xs.begin(), xs.end(), d);
        if (it == xs.end() || *it != d)
            xs.insert(it, d);
    };

    for (AgentId a = 0; a < n; ++a) {
        for (const auto& [vname, values] : grounded[a].variables) {
            VarId v = task.variables.lookup(vname);
            task.var_known[a][v] = 1;
            for (const auto& val : values)
                add_view_value(a, v, task.objects.lookup(val));
        }
    }

    // Shared-data grants: extend other agents' visibility over the owner's
    // variables. Granted values must be values the owner itself sees.
    for (AgentId owner = 0; owner < n; ++owner) {
        const SharedDataAst& sd = parsed.shared[owner];
        for (const auto& entry : sd.entries) {
            bool matched_any = false;
            for (const auto& [vname, values] : grounded[owner].variables) {
                // Match the pattern against the owner's ground variables.
                VarId v = task.variables.lookup(vname);
                const std::string& schema = entry.pattern.var;
                if (vname.compare(0, schema.size(), schema) != 0)
                    continue;
                std::string rest = vname.substr(schema.size());
                std::vector<std::string> actual;
                if (!rest.empty()) {
                    if (rest.front() != '(' || rest.back() != ')')
                        continue;
                    std::stringstream ss(rest.substr(1, rest.size() - 2));
                    std::string tok;
                    while (std::getline(ss, tok, ','))
                        actual.push_back(tok);
                }
                if (actual.size() != entry.pattern.args.size())
                    continue;
                bool match = true;
                for (size_t i = 0; i < actual.size(); ++i)
                    if (entry.pattern.args[i] != "*" &&
                        entry.pattern.args[i] != actual[i])
                        match = false;
                if (!match)
                    continue;
                matched_any = true;
                for (const auto& grant : entry.grants) {
                    AgentId grantee = task.agent_id(grant.agent);
                    task.var_known[grantee][v] = 1;
                    for (const auto& val : grant.values) {
                        ObjId d = task.objects.lookup(val);
                        if (d < 0 ||
                            !std::binary_search(values.begin(), values.end(), val))
                            throw SemanticError(
                                "shared-data grants a value outside the owner's "
                                "domain view",
                                val);
                        add_view_value(grantee, v, d);
                    }
                }
            }
            if (!matched_any)
                throw SemanticError("shared-data pattern matches no variable of "
                                    "the declaring agent",
                                    entry.pattern.var);
        }
    }

    // Global domains.
    task.domain.assign(num_vars, {});
    for (VarId v = 0; v < num_vars; ++v) {
        std::set<ObjId> dom;
        for (AgentId a = 0; a < n; ++a)
            for (ObjId d : task.view[a][v])
                dom.insert(d);
        task.domain[v].assign(dom.begin(), dom.end());
    }

    // Actions: merge per-agent groundings by signature.
    {
        std::map<std::string, GroundAction> by_sig;
        for (AgentId a = 0; a < n; ++a) {
            for (const auto& act : grounded[a].actions) {
                auto it = by_sig.find(act.signature);
                if (it == by_sig.end()) {
                    GroundAction ga;
                    ga.schema = act.schema;
                    for (const auto& arg : act.args)
                        ga.args.push_back(task.objects.lookup(arg));
                    ga.signature = act.signature;
                    for (const auto& f : act.pre) {
                        Formula ff;
                        ff.var = task.variables.lookup(
                            make_var_name(f.term.var, f.term.args));
                        ff.value = task.objects.lookup(f.value);
                        ff.negated = f.negated;
                        ga.pre.push_back(ff);
                    }
                    for (const auto& e : act.eff) {
                        EffectAtom ea;
                        ea.var = task.variables.lookup(
                            make_var_name(e.term.var, e.term.args));
                        ea.value = task.objects.lookup(e.value);
                        ea.unassign = e.unassign;
                        ga.eff.push_back(ea);
                    }
                    std::sort(ga.pre.begin(), ga.pre.end());
                    ga.pre.erase(std::unique(ga.pre.begin(), ga.pre.end()),
                                 ga.pre.end());
                    std::sort(ga.eff.begin(), ga.eff.end());
                    ga.eff.erase(std::unique(ga.eff.begin(), ga.eff.end()),
                                 ga.eff.end());
                    ga.owners.push_back(a);
                    by_sig.emplace(act.signature, std::move(ga));
                } else {
                    if (it->second.owners.back() != a)
                        it->second.owners.push_back(a);
                }
            }
        }
        std::vector<std::string> sigs;
        for (const auto& [sig, ga] : by_sig)
            sigs.push_back(sig);
        std::sort(sigs.begin(), sigs.end());
        task.agent_actions.assign(n, {});
        for (const auto& sig : sigs) {
            ActionId id = static_cast<ActionId>(task.actions.size());
            task.actions.push_back(std::move(by_sig.at(sig)));
            for (AgentId a : task.actions.back().owners)
                task.agent_actions[a].push_back(id);
        }
    }

    // Initial state: merge per-agent assignments, reject conflicts, then
    // materialize the exclusion fluents over the global domain.
    {
        std::map<VarId, std::pair<ObjId, AgentId>> assignment;
        for (AgentId a = 0; a < n; ++a) {
            for (const auto& f : parsed.problems[a].init) {
                std::string vname = make_var_name(f.term.var, f.term.args);
                VarId v = task.variables.lookup(vname);
                if (v < 0 || !task.sees_var(a, v))
                    throw SemanticError("init over a variable unknown to agent " +
                                            task.agents[a],
                                        vname);
                ObjId d = task.objects.lookup(f.value);
                const VarSchema* vs = find_schema(domain, f.term.var);
                if (!std::binary_search(task.view[a][v].begin(),
                                        task.view[a][v].end(), d) ||
                    !types.is_subtype(object_type.at(f.value), vs->value_type))
                    throw SemanticError("init value outside the agent's view",
                                        f.value);
                auto [it, fresh] = assignment.emplace(v, std::make_pair(d, a));
                if (!fresh && it->second.first != d)
                    throw SemanticError(
                        "agents disagree on the initial value of a shared variable",
                        vname);
            }
        }
        for (const auto& [v, da] : assignment) {
            task.true_init.add({v, da.first, false});
            for (ObjId other : task.domain[v])
                if (other != da.first)
                    task.true_init.add({v, other, true});
        }
    }

    // Per-agent initial states: the fully-visible projection of the merged
    // initial state.
    task.init.assign(n, State{});
    for (AgentId a = 0; a < n; ++a)
        for (const Fluent& f : task.true_init.fluents())
            if (task.visibility(a, f.var, f.value) == Visibility::Full)
                task.init[a].add(f);

    // Goals. Every goal is over the owner's own grounding, so visibility is
    // guaranteed; validate anyway to keep the contract explicit.
    task.goals.assign(n, {});
    {
        std::set<Formula> uniq;
        for (AgentId a = 0; a < n; ++a) {
            for (const auto& f : parsed.problems[a].goal) {
                std::string vname = make_var_name(f.term.var, f.term.args);
                VarId v = task.variables.lookup(vname);
                if (v < 0 || !task.sees_var(a, v))
                    throw SemanticError("goal over a variable unknown to agent " +
                                            task.agents[a],
                                        vname);
                ObjId d = task.objects.lookup(f.value);
                if (task.visibility(a, v, d) != Visibility::Full)
                    throw SemanticError("goal value not visible to agent " +
                                            task.agents[a],
                                        f.value);
                Formula gf{v, d, f.negated};
                task.goals[a].push_back(gf);
                uniq.insert(gf);
            }
        }
        task.all_goals.assign(uniq.begin(), uniq.end());
    }
    return task;
}

}  // namespace mappop
