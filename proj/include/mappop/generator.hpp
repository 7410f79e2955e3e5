#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mappop/parser.hpp"

namespace mappop {

struct GeneratedTask {
    std::string name;
    std::string domain_text;
    std::vector<AgentInput> agents;      // problem (+shared-data) texts
    std::vector<std::string> agent_names;
};

// Independent-goal satellite-style instance: n agents, each with a private
// satellite, instrument and pair of directions, and one goal only it can
// reach (turn, calibrate, turn back, take the image).
GeneratedTask generate_satellite_instance(int n_agents);

// Writes domain/problem files plus a task.json manifest; returns the
// manifest path.
std::filesystem::path write_generated(const GeneratedTask& task,
                                      const std::filesystem::path& dir);

}  // namespace mappop
