#include "mappop/parser.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mappop {

namespace {

bool is_param(const std::string& s) { return !s.empty() && s[0] == '?'; }

// Parses "a b - t c - u ..." into TypedNames. A '-' with an empty pending
// group is an error here (the variable-schema parser handles that case
// itself to find the value type).
std::vector<TypedName> parse_typed_list(const SExpr& list, size_t from, size_t to) {
    std::vector<TypedName> out;
    std::vector<std::string> pending;
    for (size_t i = from; i < to; ++i) {
        const std::string& tok = list.at(i).atom_or_throw("a name");
        if (tok == "-") {
            ++i;
            if (i >= to)
                throw ParseError("missing type after '-'", list.at(i - 1).line,
                                 list.at(i - 1).col);
            const std::string& ty = list.at(i).atom_or_throw("a type name");
            if (pending.empty())
                throw ParseError("'-' with no names before it", list.at(i).line,
                                 list.at(i).col);
            for (auto& n : pending)
                out.push_back({n, ty});
            pending.clear();
        } else {
            pending.push_back(tok);
        }
    }
    for (auto& n : pending)
        out.push_back({n, "object"});
    return out;
}

TermAst parse_term(const SExpr& e) {
    if (!e.is_list() || e.size() == 0)
        throw ParseError("expected a variable term (name args...)", e.line, e.col);
    TermAst t;
    t.var = e.at(0).atom_or_throw("a variable name");
    for (size_t i = 1; i < e.size(); ++i)
        t.args.push_back(e.at(i).atom_or_throw("an argument"));
    return t;
}

FormulaAst parse_formula(const SExpr& e, bool negated) {
    if (e.size() != 3)
        throw ParseError("expected (op (var args...) value)", e.line, e.col);
    FormulaAst f;
    f.term = parse_term(e.at(1));
    f.value = e.at(2).atom_or_throw("a value");
    f.negated = negated;
    return f;
}

// Items of a precondition conjunction: formulas and static inequalities.
void parse_pre_item(const SExpr& e, ActionSchema& a) {
    if (!e.is_list() || e.size() == 0)
        throw ParseError("expected a condition", e.line, e.col);
    const std::string& head = e.at(0).atom_or_throw("= or !=");
    if (head == "=") {
        a.pre.push_back(parse_formula(e, false));
    } else if (head == "!=") {
        if (e.size() == 3 && e.at(1).is_atom()) {
            a.constraints.push_back({e.at(1).atom, e.at(2).atom_or_throw("a name")});
        } else {
            a.pre.push_back(parse_formula(e, true));
        }
    } else {
        throw ParseError("unknown condition operator '" + head + "'", e.line, e.col);
    }
}

std::vector<SExpr> conjuncts(const SExpr& e) {
    if (e.is_list() && e.size() > 0 && e.at(0).is_atom() && e.at(0).atom == "and")
        return std::vector<SExpr>(e.items.begin() + 1, e.items.end());
    if (e.is_list() && e.size() == 0)
        return {};
    return {e};
}

ActionSchema parse_action(const SExpr& e) {
    ActionSchema a;
    a.name = e.at(1).atom_or_throw("an action name");
    size_t i = 2;
    while (i < e.size()) {
        const std::string& key = e.at(i).atom_or_throw("an action section keyword");
        if (i + 1 >= e.size())
            throw ParseError("missing value after " + key, e.at(i).line, e.at(i).col);
        const SExpr& val = e.at(i + 1);
        if (key == ":parameters") {
            if (!val.is_list())
                throw ParseError("expected a parameter list", val.line, val.col);
            a.params = parse_typed_list(val, 0, val.size());
        } else if (key == ":precondition") {
            for (const auto& c : conjuncts(val))
                parse_pre_item(c, a);
        } else if (key == ":effect") {
            for (const auto& c : conjuncts(val)) {
                if (!c.is_list() || c.size() != 3)
                    throw ParseError("expected (assign|unassign (var args...) value)",
                                     c.line, c.col);
                const std::string& op = c.at(0).atom_or_throw("assign or unassign");
                if (op != "assign" && op != "unassign")
                    throw ParseError("unknown effect operator '" + op + "'", c.line,
                                     c.col);
                EffectAst ef;
                ef.term = parse_term(c.at(1));
                ef.value = c.at(2).atom_or_throw("a value");
                ef.unassign = (op == "unassign");
                a.eff.push_back(ef);
            }
        } else {
            throw ParseError("unknown action section '" + key + "'", e.at(i).line,
                             e.at(i).col);
        }
        i += 2;
    }
    return a;
}

void expect_define(const SExpr& root, const char* kind, std::string& name_out) {
    if (!root.is_list() || root.size() < 2 || !root.at(0).is_atom() ||
        root.at(0).atom != "define")
        throw ParseError("expected (define ...)", root.line, root.col);
    const SExpr& head = root.at(1);
    if (!head.is_list() || head.size() != 2 || !head.at(0).is_atom() ||
        head.at(0).atom != kind)
        throw ParseError(std::string("expected (") + kind + " <name>)", head.line,
                         head.col);
    name_out = head.at(1).atom_or_throw("a name");
}

void check_domain_invariants(const DomainAst& d) {
    std::set<std::string> types{"object"};
    for (const auto& t : d.types)
        types.insert(t.name);
    for (const auto& t : d.types)
        if (!types.count(t.type))
            throw SemanticError("undeclared parent type", t.type);
    std::set<std::string> vars;
    for (const auto& v : d.variables) {
        if (!vars.insert(v.name).second)
            throw SemanticError("duplicate variable schema", v.name);
        if (!types.count(v.value_type))
            throw SemanticError("undeclared value type", v.value_type);
        for (const auto& p : v.params)
            if (!types.count(p.type))
                throw SemanticError("undeclared parameter type", p.type);
    }
    std::set<std::string> action_names;
    for (const auto& a : d.actions) {
        if (!action_names.insert(a.name).second)
            throw SemanticError("duplicate action schema", a.name);
        std::set<std::string> params;
        for (const auto& p : a.params) {
            if (!params.insert(p.name).second)
                throw SemanticError("duplicate parameter", p.name);
            if (!types.count(p.type))
                throw SemanticError("undeclared parameter type", p.type);
        }
        auto check_ref = [&](const std::string& s) {
            if (is_param(s) && !params.count(s))
                throw SemanticError("parameter not declared in :parameters", s);
        };
        auto check_term = [&](const TermAst& t) {
            if (!vars.count(t.var))
                throw SemanticError("undeclared variable schema", t.var);
            for (const auto& arg : t.args)
                check_ref(arg);
        };
        for (const auto& f : a.pre) {
            check_term(f.term);
            check_ref(f.value);
        }
        for (const auto& c : a.constraints) {
            check_ref(c.lhs);
            check_ref(c.rhs);
        }
        for (const auto& e : a.eff) {
            check_term(e.term);
            check_ref(e.value);
        }
    }
}

}  // namespace

DomainAst parse_domain(const std::string& text) {
    SExpr root = read_sexpr(text);
    DomainAst d;
    expect_define(root, "domain", d.name);
    for (size_t i = 2; i < root.size(); ++i) {
        const SExpr& sec = root.at(i);
        if (!sec.is_list() || sec.size() == 0)
            throw ParseError("expected a domain section", sec.line, sec.col);
        const std::string& key = sec.at(0).atom_or_throw("a section keyword");
        if (key == ":types") {
            d.types = parse_typed_list(sec, 1, sec.size());
        } else if (key == ":variables") {
            for (size_t j = 1; j < sec.size(); ++j) {
                const SExpr& vd = sec.at(j);
                if (!vd.is_list() || vd.size() < 3)
                    throw ParseError("expected (name params... - valuetype)", vd.line,
                                     vd.col);
                VarSchema vs;
                vs.name = vd.at(0).atom_or_throw("a variable name");
                // The value type is the trailing "- <type>"; everything in
                // between is the typed parameter list.
                if (!vd.at(vd.size() - 2).is_atom() ||
                    vd.at(vd.size() - 2).atom != "-")
                    throw ParseError("variable schema must end with '- <valuetype>'",
                                     vd.line, vd.col);
                vs.value_type = vd.at(vd.size() - 1).atom_or_throw("a value type");
                vs.params = parse_typed_list(vd, 1, vd.size() - 2);
                d.variables.push_back(std::move(vs));
            }
        } else if (key == ":action") {
            d.actions.push_back(parse_action(sec));
        } else {
            throw ParseError("unknown domain section '" + key + "'", sec.line,
                             sec.col);
        }
    }
    check_domain_invariants(d);
    return d;
}

ProblemAst parse_problem(const std::string& text) {
    SExpr root = read_sexpr(text);
    ProblemAst p;
    expect_define(root, "problem", p.name);
    for (size_t i = 2; i < root.size(); ++i) {
        const SExpr& sec = root.at(i);
        if (!sec.is_list() || sec.size() == 0)
            throw ParseError("expected a problem section", sec.line, sec.col);
        const std::string& key = sec.at(0).atom_or_throw("a section keyword");
        if (key == ":objects") {
            p.objects = parse_typed_list(sec, 1, sec.size());
        } else if (key == ":init") {
            for (size_t j = 1; j < sec.size(); ++j) {
                const SExpr& lit = sec.at(j);
                if (!lit.is_list() || lit.size() != 3 || !lit.at(0).is_atom() ||
                    lit.at(0).atom != "=")
                    throw ParseError("init literals must be (= (var args...) value)",
                                     lit.line, lit.col);
                p.init.push_back(parse_formula(lit, false));
            }
        } else if (key == ":goal") {
            if (sec.size() != 2)
                throw ParseError("expected exactly one goal formula", sec.line,
                                 sec.col);
            for (const auto& g : conjuncts(sec.at(1))) {
                if (!g.is_list() || g.size() != 3)
                    throw ParseError("goals must be (= ...) or (!= ...)", g.line,
                                     g.col);
                const std::string& op = g.at(0).atom_or_throw("= or !=");
                if (op != "=" && op != "!=")
                    throw ParseError("goals must be (= ...) or (!= ...)", g.line,
                                     g.col);
                p.goal.push_back(parse_formula(g, op == "!="));
            }
        } else {
            throw ParseError("unknown problem section '" + key + "'", sec.line,
                             sec.col);
        }
    }
    // Invariants: declared objects; one positive value per variable in init;
    // no parameters outside the domain file.
    std::set<std::string> objs;
    for (const auto& o : p.objects)
        if (!objs.insert(o.name).second)
            throw SemanticError("duplicate object", o.name);
    auto check_ground = [&](const FormulaAst& f, const char* where) {
        for (const auto& a : f.term.args) {
            if (is_param(a))
                throw SemanticError(std::string(where) + " must be ground", a);
            if (!objs.count(a))
                throw SemanticError("undeclared object", a);
        }
        if (is_param(f.value))
            throw SemanticError(std::string(where) + " must be ground", f.value);
        if (!objs.count(f.value))
            throw SemanticError("undeclared object", f.value);
    };
    std::set<std::string> assigned;
    for (const auto& f : p.init) {
        check_ground(f, "init");
        std::string key = f.term.var;
        for (const auto& a : f.term.args)
            key += ' ' + a;
        if (!assigned.insert(key).second)
            throw SemanticError("init assigns a variable twice", key);
    }
    for (const auto& g : p.goal)
        check_ground(g, "goal");
    return p;
}

SharedDataAst parse_shared_data(const std::string& text) {
    SExpr root = read_sexpr(text);
    SharedDataAst s;
    if (!root.is_list() || root.size() == 0 || !root.at(0).is_atom() ||
        root.at(0).atom != ":shared-data")
        throw ParseError("expected (:shared-data ...)", root.line, root.col);
    for (size_t i = 1; i < root.size(); ++i) {
        const SExpr& ent = root.at(i);
        if (!ent.is_list() || ent.size() < 3)
            throw ParseError("expected ((var argpat...) :with (agent :values (...))...)",
                             ent.line, ent.col);
        SharedEntryAst e;
        e.pattern = parse_term(ent.at(0));
        if (!ent.at(1).is_atom() || ent.at(1).atom != ":with")
            throw ParseError("expected :with", ent.at(1).line, ent.at(1).col);
        for (size_t j = 2; j < ent.size(); ++j) {
            const SExpr& gr = ent.at(j);
            if (!gr.is_list() || gr.size() != 3 || !gr.at(1).is_atom() ||
                gr.at(1).atom != ":values" || !gr.at(2).is_list())
                throw ParseError("expected (agent :values (obj...))", gr.line, gr.col);
            SharedGrantAst g;
            g.agent = gr.at(0).atom_or_throw("an agent name");
            for (const auto& v : gr.at(2).items)
                g.values.push_back(v.atom_or_throw("an object name"));
            e.grants.push_back(std::move(g));
        }
        s.entries.push_back(std::move(e));
    }
    return s;
}

ParsedTask parse_task(const std::string& domain_text,
                      const std::vector<AgentInput>& agents) {
    ParsedTask t;
    t.domain = parse_domain(domain_text);
    std::set<std::string> agent_names;
    for (const auto& a : agents) {
        t.problems.push_back(parse_problem(a.problem_text));
        if (!agent_names.insert(t.problems.back().name).second)
            throw SemanticError("duplicate agent (problem) name",
                                t.problems.back().name);
    }
    for (const auto& a : agents) {
        if (a.shared_data_text)
            t.shared.push_back(parse_shared_data(*a.shared_data_text));
        else
            t.shared.push_back(SharedDataAst{});
    }
    // Cross-file checks that need no grounding: referenced agents exist,
    // variable schemas exist, objects in problems have declared types.
    std::set<std::string> types{"object"};
    for (const auto& ty : t.domain.types)
        types.insert(ty.name);
    std::set<std::string> schema_names;
    for (const auto& v : t.domain.variables)
        schema_names.insert(v.name);
    for (const auto& p : t.problems)
        for (const auto& o : p.objects)
            if (!types.count(o.type))
                throw SemanticError("object with undeclared type", o.name);
    for (size_t i = 0; i < t.shared.size(); ++i) {
        for (const auto& e : t.shared[i].entries) {
            if (!schema_names.count(e.pattern.var))
                throw SemanticError("shared-data for undeclared variable",
                                    e.pattern.var);
            for (const auto& g : e.grants) {
                if (!agent_names.count(g.agent))
                    throw SemanticError("shared-data references unknown agent",
                                        g.agent);
                if (g.agent == t.problems[i].name)
                    throw SemanticError("shared-data grants to the owning agent",
                                        g.agent);
            }
        }
    }
    return t;
}

}  // namespace mappop
