#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mappop/ground.hpp"
#include "mappop/parser.hpp"
#include "mappop/task.hpp"

namespace mappop {

struct TaskFiles {
    std::string name;
    std::filesystem::path domain;
    struct Agent {
        std::filesystem::path problem;
        std::filesystem::path shared;  // empty if none
    };
    std::vector<Agent> agents;
};

// Reads a task.json manifest: {"name", "domain", "agents": [{"problem",
// "shared"?}...]}. Paths are relative to the manifest.
TaskFiles read_manifest(const std::filesystem::path& manifest);

ParsedTask parse_task_files(const TaskFiles& files);

// Manifest -> grounded task in one step.
MapTask load_task(const std::filesystem::path& manifest);

std::string read_file(const std::filesystem::path& path);

}  // namespace mappop
