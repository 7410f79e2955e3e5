#include "mappop/taskload.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mappop {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot read file: " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

TaskFiles read_manifest(const std::filesystem::path& manifest) {
    nlohmann::json j = nlohmann::json::parse(read_file(manifest));
    TaskFiles files;
    auto dir = manifest.parent_path();
    files.name = j.at("name").get<std::string>();
    files.domain = dir / j.at("domain").get<std::string>();
    for (const auto& a : j.at("agents")) {
        TaskFiles::Agent agent;
        agent.problem = dir / a.at("problem").get<std::string>();
        if (a.contains("shared"))
            agent.shared = dir / a.at("shared").get<std::string>();
        files.agents.push_back(agent);
    }
    return files;
}

ParsedTask parse_task_files(const TaskFiles& files) {
    std::vector<AgentInput> inputs;
    for (const auto& a : files.agents) {
        AgentInput in;
        in.problem_text = read_file(a.problem);
        if (!a.shared.empty())
            in.shared_data_text = read_file(a.shared);
        inputs.push_back(std::move(in));
    }
    return parse_task(read_file(files.domain), inputs);
}

MapTask load_task(const std::filesystem::path& manifest) {
    return build_task(parse_task_files(read_manifest(manifest)));
}

}  // namespace mappop
