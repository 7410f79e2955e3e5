#include "mappop/ast.hpp"

#include <sstream>

namespace mappop {

namespace {

void print_typed_list(const std::vector<TypedName>& xs, std::ostringstream& os) {
    // Groups of equal consecutive type print as "a b - t".
    for (size_t i = 0; i < xs.size();) {
        size_t j = i;
        while (j < xs.size() && xs[j].type == xs[i].type)
            ++j;
        for (size_t k = i; k < j; ++k)
            os << (k == i ? "" : " ") << xs[k].name;
        os << " - " << xs[i].type;
        if (j < xs.size())
            os << ' ';
        i = j;
    }
}

void print_term(const TermAst& t, std::ostringstream& os) {
    os << '(' << t.var;
    for (const auto& a : t.args)
        os << ' ' << a;
    os << ')';
}

void print_formula(const FormulaAst& f, std::ostringstream& os) {
    os << '(' << (f.negated ? "!=" : "=") << ' ';
    print_term(f.term, os);
    os << ' ' << f.value << ')';
}

}  // namespace

std::string print_domain(const DomainAst& d) {
    std::ostringstream os;
    os << "(define (domain " << d.name << ")\n";
    if (!d.types.empty()) {
        os << "  (:types ";
        print_typed_list(d.types, os);
        os << ")\n";
    }
    os << "  (:variables";
    for (const auto& v : d.variables) {
        os << "\n    (" << v.name;
        if (!v.params.empty()) {
            os << ' ';
            print_typed_list(v.params, os);
        }
        os << " - " << v.value_type << ')';
    }
    os << ")\n";
    for (const auto& a : d.actions) {
        os << "  (:action " << a.name << "\n    :parameters (";
        print_typed_list(a.params, os);
        os << ")\n    :precondition (and";
        for (const auto& p : a.pre) {
            os << ' ';
            print_formula(p, os);
        }
        for (const auto& c : a.constraints)
            os << " (!= " << c.lhs << ' ' << c.rhs << ')';
        os << ")\n    :effect (and";
        for (const auto& e : a.eff) {
            os << ' ' << '(' << (e.unassign ? "unassign" : "assign") << ' ';
            print_term(e.term, os);
            os << ' ' << e.value << ')';
        }
        os << "))\n";
    }
    os << ")\n";
    return os.str();
}

std::string print_problem(const ProblemAst& p) {
    std::ostringstream os;
    os << "(define (problem " << p.name << ")\n  (:objects ";
    print_typed_list(p.objects, os);
    os << ")\n  (:init";
    for (const auto& f : p.init) {
        os << ' ';
        print_formula(f, os);
    }
    os << ")\n  (:goal (and";
    for (const auto& g : p.goal) {
        os << ' ';
        print_formula(g, os);
    }
    os << ")))\n";
    return os.str();
}

std::string print_shared_data(const SharedDataAst& s) {
    std::ostringstream os;
    os << "(:shared-data";
    for (const auto& e : s.entries) {
        os << "\n  (";
        print_term(e.pattern, os);
        os << " :with";
        for (const auto& g : e.grants) {
            os << " (" << g.agent << " :values (";
            for (size_t i = 0; i < g.values.size(); ++i)
                os << (i ? " " : "") << g.values[i];
            os << "))";
        }
        os << ')';
    }
    os << ")\n";
    return os.str();
}

}  // namespace mappop
