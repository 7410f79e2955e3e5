#include "mappop/task.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace mappop {

namespace {

bool sorted_contains(const std::vector<ObjId>& xs, ObjId x) {
    return std::binary_search(xs.begin(), xs.end(), x);
}

void sorted_insert(std::vector<ObjId>& xs, ObjId x) {
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.end() || *it != x)
        xs.insert(it, x);
}

void sorted_erase(std::vector<ObjId>& xs, ObjId x) {
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it != xs.end() && *it == x)
        xs.erase(it);
}

}  // namespace

Truth State::evaluate(const Formula& f) const {
    auto it = entries_.find(f.var);
    if (it == entries_.end())
        return Truth::Unknown;
    const VarEntry& e = it->second;
    if (!f.negated) {
        if (e.positive == f.value)
            return Truth::True;
        if (sorted_contains(e.negated, f.value))
            return Truth::False;
        return Truth::Unknown;
    }
    if (sorted_contains(e.negated, f.value))
        return Truth::True;
    if (e.positive == f.value)
        return Truth::False;
    return Truth::Unknown;
}

bool State::contains(const Fluent& f) const {
    auto it = entries_.find(f.var);
    if (it == entries_.end())
        return false;
    if (f.value == kBottom)
        return !f.negated && it->second.bottom;
    if (f.negated)
        return sorted_contains(it->second.negated, f.value);
    return it->second.positive == f.value;
}

void State::add(const Fluent& f) {
    VarEntry& e = entries_[f.var];
    if (f.value == kBottom) {
        assert(!f.negated && "bottom fluents are always positive");
        e.bottom = true;
        return;
    }
    if (f.negated) {
        // <v,not d> contradicts <v,d>.
        if (e.positive == f.value)
            e.positive = kNoValue;
        sorted_insert(e.negated, f.value);
    } else {
        // <v,d> contradicts any other positive value and <v,not d>.
        e.positive = f.value;
        sorted_erase(e.negated, f.value);
    }
}

void State::remove(const Fluent& f) {
    auto it = entries_.find(f.var);
    if (it == entries_.end())
        return;
    VarEntry& e = it->second;
    if (f.value == kBottom) {
        e.bottom = false;
    } else if (f.negated) {
        sorted_erase(e.negated, f.value);
    } else if (e.positive == f.value) {
        e.positive = kNoValue;
    }
    if (e.positive == kNoValue && !e.bottom && e.negated.empty())
        entries_.erase(it);
}

std::vector<Fluent> State::fluents() const {
    std::vector<Fluent> out;
    for (const auto& [var, e] : entries_) {
        if (e.positive != kNoValue)
            out.push_back({var, e.positive, false});
        if (e.bottom)
            out.push_back({var, kBottom, false});
        for (ObjId d : e.negated)
            out.push_back({var, d, true});
    }
    std::sort(out.begin(), out.end());
    return out;
}

AgentId MapTask::agent_id(const std::string& name) const {
    for (size_t i = 0; i < agents.size(); ++i)
        if (agents[i] == name)
            return static_cast<AgentId>(i);
    return -1;
}

bool MapTask::sees_value(AgentId a, VarId v, ObjId d) const {
    return sorted_contains(view[a][v], d);
}

Visibility MapTask::visibility(AgentId a, VarId v, ObjId d) const {
    if (!sees_var(a, v))
        return Visibility::None;
    if (d != kBottom && sees_value(a, v, d))
        return Visibility::Full;
    return Visibility::Partial;
}

bool MapTask::private_to(VarId v, AgentId a) const {
    if (!sees_var(a, v))
        return false;
    for (int j = 0; j < agent_count(); ++j)
        if (j != a && sees_var(j, v))
            return false;
    return true;
}

std::string MapTask::fluent_name(const Fluent& f) const {
    std::ostringstream os;
    os << variables.name(f.var) << (f.negated ? "!=" : "=")
       << (f.value == kBottom ? std::string("_") : objects.name(f.value));
    return os.str();
}

std::string MapTask::formula_name(const Formula& f) const {
    return fluent_name(fluent_of(f));
}

Truth evaluate(const Formula& f, const State& s) { return s.evaluate(f); }

State apply(const State& s, const GroundAction& a, const MapTask& task) {
    for (const Formula& p : a.pre)
        if (s.evaluate(p) != Truth::True)
            throw PreconditionUnsatisfied(
                "precondition not satisfied: " + task.formula_name(p), p);
    State next = s;
    for (const EffectAtom& e : a.eff) {
        if (e.unassign) {
            next.remove({e.var, e.value, false});
            next.add({e.var, e.value, true});
        } else {
            next.add({e.var, e.value, false});
            for (ObjId d : task.domain[e.var])
                if (d != e.value)
                    next.add({e.var, d, true});
        }
    }
    return next;
}

std::optional<Fluent> project_fluent(const Fluent& f, AgentId agent,
                                     const MapTask& task) {
    switch (task.visibility(agent, f.var, f.value)) {
        case Visibility::None:
            return std::nullopt;
        case Visibility::Partial:
            return Fluent{f.var, kBottom, false};
        case Visibility::Full:
            return f;
    }
    return std::nullopt;
}

}  // namespace mappop
