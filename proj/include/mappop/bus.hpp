#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mappop/plan.hpp"
#include "mappop/task.hpp"

namespace mappop {

// Additions one agent proposes on top of a base plan: new steps (appended
// after the base's steps, ids continuing its numbering), orderings and links.
struct RefinementStep {
    std::string base_signature;
    AgentId proposer = kNoAgent;
    std::vector<PlanStep> new_steps;
    std::vector<std::pair<int, int>> new_orderings;
    std::vector<CausalLink> new_links;
};

struct FluentInfo {
    Fluent fluent;
    int cost = 0;
    std::vector<AgentId> achievers;  // sorted
};

struct FluentBatch {
    std::vector<FluentInfo> fluents;
};

struct RefinementBatch {
    std::string base_signature;
    std::vector<RefinementStep> steps;
};

struct Vote {
    std::string plan_signature;
};

struct BatonPass {
    std::string adopted_signature;
};

struct GoalSelection {
    int step = -1;
    Formula formula;
    std::string base_signature;
};

using Payload =
    std::variant<FluentBatch, RefinementBatch, Vote, BatonPass, GoalSelection>;

struct Message {
    AgentId sender = -1;
    AgentId recipient = -1;
    int round = -1;  // stamped by the bus
    Payload payload;
};

// Raised when a fluent batch carries a fluent its recipient may not see.
// This is a bug trap: shipped senders filter before enqueueing.
struct PrivacyViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct PrivacyFinding {
    size_t message_index;
    Fluent fluent;
    AgentId recipient;
};

// Synchronous broadcast rounds over an in-memory transport. Delivery order
// is (sender, recipient) ascending within a round; every message is logged.
class Bus {
public:
    explicit Bus(const MapTask& task) : task_(&task) {}

    // outboxes[i] holds agent i's messages for this round. Returns inboxes
    // per recipient in delivery order.
    std::vector<std::vector<Message>> broadcast_round(
        std::vector<std::vector<Message>> outboxes);

    int rounds_run() const { return round_; }
    const std::vector<Message>& trace() const { return trace_; }

    // Line-delimited "round sender recipient kind summary".
    std::string export_trace() const;

private:
    const MapTask* task_;
    int round_ = 0;
    std::vector<Message> trace_;
};

std::vector<PrivacyFinding> audit_privacy(const std::vector<Message>& trace,
                                          const MapTask& task);

std::string describe_finding(const PrivacyFinding& f, const MapTask& task);

}  // namespace mappop
