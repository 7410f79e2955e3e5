#include "mappop/generator.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mappop {

GeneratedTask generate_satellite_instance(int n_agents) {
    if (n_agents < 1 || n_agents > 14)
        throw std::invalid_argument("agent count must be in 1..14");
    GeneratedTask t;
    t.name = "gen-satellite-" + std::to_string(n_agents);
    t.domain_text = R"((define (domain gen-satellite)
  (:types satellite instrument direction flag - object)
  (:variables
    (pointing ?s - satellite - direction)
    (calibrated ?i - instrument - flag)
    (caltarget ?i - instrument - direction)
    (onboard ?i - instrument - satellite)
    (image ?d - direction - flag))
  (:action turn
    :parameters (?s - satellite ?from ?to - direction)
    :precondition (and (= (pointing ?s) ?from) (!= ?from ?to))
    :effect (and (assign (pointing ?s) ?to)))
  (:action calibrate
    :parameters (?s - satellite ?i - instrument ?d - direction)
    :precondition (and (= (pointing ?s) ?d) (= (caltarget ?i) ?d)
                       (= (onboard ?i) ?s))
    :effect (and (assign (calibrated ?i) yes)))
  (:action take-image
    :parameters (?s - satellite ?i - instrument ?d - direction)
    :precondition (and (= (pointing ?s) ?d) (= (calibrated ?i) yes)
                       (= (onboard ?i) ?s))
    :effect (and (assign (image ?d) yes)))
)
)";
    for (int k = 1; k <= n_agents; ++k) {
        std::string sat = "sat" + std::to_string(k);
        std::string ins = "ins" + std::to_string(k);
        std::string cal = "caldir" + std::to_string(k);
        std::string img = "imgdir" + std::to_string(k);
        std::ostringstream os;
        os << "(define (problem " << sat << ")\n  (:objects " << sat
           << " - satellite " << ins << " - instrument " << cal << ' ' << img
           << " - direction yes - flag)\n  (:init (= (pointing " << sat << ") "
           << img << ") (= (caltarget " << ins << ") " << cal
           << ") (= (onboard " << ins << ") " << sat
           << "))\n  (:goal (and (= (image " << img << ") yes))))\n";
        t.agents.push_back({os.str(), std::nullopt});
        t.agent_names.push_back(sat);
    }
    return t;
}

std::filesystem::path write_generated(const GeneratedTask& task,
                                      const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "domain.mapl");
        f << task.domain_text;
    }
    nlohmann::json manifest;
    manifest["name"] = task.name;
    manifest["domain"] = "domain.mapl";
    manifest["agents"] = nlohmann::json::array();
    for (size_t i = 0; i < task.agents.size(); ++i) {
        std::string prob = task.agent_names[i] + ".prob";
        {
            std::ofstream f(dir / prob);
            f << task.agents[i].problem_text;
        }
        nlohmann::json a;
        a["problem"] = prob;
        if (task.agents[i].shared_data_text) {
            std::string sd = task.agent_names[i] + ".sd";
            std::ofstream f(dir / sd);
            f << *task.agents[i].shared_data_text;
            a["shared"] = sd;
        }
        manifest["agents"].push_back(a);
    }
    std::filesystem::path mpath = dir / "task.json";
    std::ofstream f(mpath);
    f << manifest.dump(2) << '\n';
    return mpath;
}

}  // namespace mappop
