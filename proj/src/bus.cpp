#include "mappop/bus.hpp"

#include <algorithm>
#include <sstream>

namespace mappop {

namespace {

void check_fluent_batch(const Message& m, const MapTask& task) {
    const auto* batch = std::get_if<FluentBatch>(&m.payload);
    if (!batch)
        return;
    for (const FluentInfo& fi : batch->fluents)
        if (task.visibility(m.recipient, fi.fluent.var, fi.fluent.value) !=
            Visibility::Full)
            throw PrivacyViolation("fluent " + task.fluent_name(fi.fluent) +
                                   " sent to agent " + task.agents[m.recipient] +
                                   " without visibility");
}

std::string payload_kind(const Payload& p) {
    switch (p.index()) {
        case 0: return "fluents";
        case 1: return "plans";
        case 2: return "vote";
        case 3: return "baton";
        default: return "goal";
    }
}

std::string payload_summary(const Payload& p, const MapTask& task) {
    std::ostringstream os;
    if (const auto* fb = std::get_if<FluentBatch>(&p)) {
        os << "n=" << fb->fluents.size();
        for (const FluentInfo& fi : fb->fluents) {
            os << ' ' << task.fluent_name(fi.fluent) << '@' << fi.cost << '{';
            for (size_t i = 0; i < fi.achievers.size(); ++i)
                os << (i ? "," : "") << task.agents[fi.achievers[i]];
            os << '}';
        }
    } else if (const auto* rb = std::get_if<RefinementBatch>(&p)) {
        os << "n=" << rb->steps.size();
        for (const RefinementStep& s : rb->steps)
            os << " +" << s.new_steps.size() << "steps/" << s.new_links.size()
               << "links";
    } else if (const auto* v = std::get_if<Vote>(&p)) {
        os << "for=" << std::hash<std::string>{}(v->plan_signature);
    } else if (const auto* b = std::get_if<BatonPass>(&p)) {
        os << "adopted=" << std::hash<std::string>{}(b->adopted_signature);
    } else if (const auto* g = std::get_if<GoalSelection>(&p)) {
        os << "goal=" << task.formula_name(g->formula) << "@step" << g->step;
    }
    return os.str();
}

}  // namespace

std::vector<std::vector<Message>> Bus::broadcast_round(
    std::vector<std::vector<Message>> outboxes) {
    int n = task_->agent_count();
    std::vector<std::vector<Message>> inboxes(n);
    for (int sender = 0; sender < static_cast<int>(outboxes.size()); ++sender) {
        auto& out = outboxes[sender];
        std::stable_sort(out.begin(), out.end(),
                         [](const Message& a, const Message& b) {
                             return a.recipient < b.recipient;
                         });
        for (Message& m : out) {
            if (m.recipient < 0 || m.recipient >= n)
                throw std::logic_error("message addressed to unknown agent");
            m.sender = sender;
            m.round = round_;
            check_fluent_batch(m, *task_);
            trace_.push_back(m);
            inboxes[m.recipient].push_back(std::move(m));
        }
    }
    ++round_;
    return inboxes;
}

std::string Bus::export_trace() const {
    std::ostringstream os;
    for (const Message& m : trace_)
        os << m.round << ' ' << task_->agents[m.sender] << ' '
           << task_->agents[m.recipient] << ' ' << payload_kind(m.payload) << ' '
           << payload_summary(m.payload, *task_) << '\n';
    return os.str();
}

std::vector<PrivacyFinding> audit_privacy(const std::vector<Message>& trace,
                                          const MapTask& task) {
    std::vector<PrivacyFinding> findings;
    for (size_t i = 0; i < trace.size(); ++i) {
        const auto* batch = std::get_if<FluentBatch>(&trace[i].payload);
        if (!batch)
            continue;
        for (const FluentInfo& fi : batch->fluents)
            if (task.visibility(trace[i].recipient, fi.fluent.var,
                                fi.fluent.value) != Visibility::Full)
                findings.push_back({i, fi.fluent, trace[i].recipient});
    }
    return findings;
}

std::string describe_finding(const PrivacyFinding& f, const MapTask& task) {
    std::ostringstream os;
    os << "message " << f.message_index << ": fluent "
       << task.fluent_name(f.fluent) << " leaked to " << task.agents[f.recipient];
    return os.str();
}

}  // namespace mappop
