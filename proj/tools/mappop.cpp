#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "mappop/bus.hpp"
#include "mappop/coordinator.hpp"
#include "mappop/generator.hpp"
#include "mappop/ground.hpp"
#include "mappop/plan_io.hpp"
#include "mappop/pop.hpp"
#include "mappop/rpg.hpp"
#include "mappop/taskload.hpp"
#include "mappop/validator.hpp"

namespace fs = std::filesystem;
using namespace mappop;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitUnsolvable = 1;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 3;

struct TaskOptions {
    std::string manifest;
    std::string domain;
    std::vector<std::string> agents;  // "problem[,shared]"

    TaskFiles resolve() const {
        if (!manifest.empty())
            return read_manifest(manifest);
        if (domain.empty() || agents.empty())
            throw std::runtime_error(
                "provide --task or --domain with at least one --agent");
        TaskFiles files;
        files.name = fs::path(domain).stem().string();
        files.domain = domain;
        for (const auto& spec : agents) {
            TaskFiles::Agent a;
            auto comma = spec.find(',');
            a.problem = spec.substr(0, comma);
            if (comma != std::string::npos)
                a.shared = spec.substr(comma + 1);
            files.agents.push_back(a);
        }
        return files;
    }
};

void add_task_options(CLI::App* cmd, TaskOptions& opts) {
    cmd->add_option("--task,-t", opts.manifest, "task.json manifest");
    cmd->add_option("--domain,-d", opts.domain, "domain file");
    cmd->add_option("--agent,-a", opts.agents,
                    "agent problem file, optionally 'problem,shared-data'");
}

struct SolveOptions {
    SolveConfig config;
    std::string trace_file;
    bool parallel = false;
};

void add_solve_options(CLI::App* cmd, SolveOptions& opts) {
    cmd->add_option("--seed", opts.config.seed, "random seed");
    cmd->add_option("--k", opts.config.k, "max refinements per agent per call");
    cmd->add_option("--node-budget", opts.config.node_budget,
                    "A* expansions per refinement call");
    cmd->add_option("--iters", opts.config.iteration_cap, "iteration cap");
    cmd->add_option("--timeout", opts.config.timeout_seconds, "seconds");
    cmd->add_option("--penalty", opts.config.unknown_penalty,
                    "F cost of a hidden-value open goal");
    cmd->add_option("--trace", opts.trace_file, "write the message trace here");
    cmd->add_flag("--parallel", opts.parallel, "refine/expand agents in parallel");
}

struct SolvedTask {
    MapTask task;
    SolveResult result;
    std::string trace;
    double seconds = 0;
};

SolvedTask run_solver(const TaskFiles& files, const SolveOptions& opts) {
    SolvedTask out;
    out.task = build_task(parse_task_files(files));
    Bus bus(out.task);
    auto t0 = std::chrono::steady_clock::now();
    SolveConfig config = opts.config;
    config.parallel = opts.parallel;
    auto rpgs = build_dis_rpg(out.task, bus, config.parallel);
    out.result = solve(out.task, rpgs, bus, config);
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    out.trace = bus.export_trace();
    return out;
}

int cmd_parse(const TaskOptions& opts) {
    TaskFiles files = opts.resolve();
    ParsedTask parsed = parse_task_files(files);
    std::cout << "ok: domain " << parsed.domain.name << ", "
              << parsed.problems.size() << " agent(s)\n";
    return kExitSolved;
}

int cmd_ground(const TaskOptions& opts) {
    MapTask task = build_task(parse_task_files(opts.resolve()));
    for (AgentId a = 0; a < task.agent_count(); ++a) {
        std::cout << task.agents[a] << ": " << task.agent_actions[a].size()
                  << " actions\n";
        for (ActionId id : task.agent_actions[a])
            std::cout << "  " << task.actions[id].signature << '\n';
    }
    return kExitSolved;
}

int cmd_rpg(const TaskOptions& opts, bool parallel) {
    MapTask task = build_task(parse_task_files(opts.resolve()));
    Bus bus(task);
    auto rpgs = build_dis_rpg(task, bus, parallel);
    for (AgentId a = 0; a < task.agent_count(); ++a) {
        std::cout << "agent " << task.agents[a] << '\n';
        std::cout << dump_rpg(rpgs[a], task);
    }
    return kExitSolved;
}

int cmd_solve(const TaskOptions& opts, const SolveOptions& sopts,
              const std::string& out_file) {
    TaskFiles files = opts.resolve();
    SolvedTask solved = run_solver(files, sopts);
    if (!sopts.trace_file.empty()) {
        std::ofstream f(sopts.trace_file);
        f << solved.trace;
    }
    switch (solved.result.outcome) {
        case Outcome::Solution: {
            std::string text =
                write_plan(*solved.result.plan, solved.task, files.name);
            std::cout << text;
            if (!out_file.empty()) {
                std::ofstream f(out_file);
                f << text;
            }
            return kExitSolved;
        }
        case Outcome::Unsolvable:
            std::cout << "unsolvable: " << solved.result.reason << '\n';
            return kExitUnsolvable;
        case Outcome::BudgetExhausted:
            std::cout << "budget exhausted: " << solved.result.reason << '\n';
            return kExitBudget;
    }
    return kExitUsage;
}

int cmd_validate(const TaskOptions& opts, const std::string& plan_file,
                 unsigned seed, int simulations) {
    MapTask task = build_task(parse_task_files(opts.resolve()));
    PartialPlan plan = read_plan(read_file(plan_file), task);
    ValidationReport report = validate(plan, task);
    std::cout << report_to_string(report);
    if (report.valid && simulations > 0) {
        SimulationResult sim = simulate(plan, task, seed, simulations);
        if (!sim.success) {
            std::cout << "simulation failed (sample " << sim.failed_sample
                      << "): " << sim.detail << '\n';
            return kExitUnsolvable;
        }
        std::cout << "simulated " << simulations << " linearizations: ok\n";
    }
    return report.valid ? kExitSolved : kExitUnsolvable;
}

int cmd_bench(const std::vector<std::string>& inputs, const SolveOptions& sopts,
              const std::string& csv_file) {
    std::vector<fs::path> manifests;
    for (const auto& in : inputs) {
        fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::recursive_directory_iterator(p))
                if (e.path().filename() == "task.json")
                    found.push_back(e.path());
            std::sort(found.begin(), found.end());
            manifests.insert(manifests.end(), found.begin(), found.end());
        } else {
            manifests.push_back(p);
        }
    }
    if (manifests.empty()) {
        std::cerr << "no task manifests found\n";
        return kExitUsage;
    }

    struct Row {
        std::string problem;
        int agents;
        double coupling;
        int domain_actions;
        int acts = -1, ts = -1, partics = -1;
        double time = 0;
        bool solved = false;
        bool valid = false;
    };
    std::vector<Row> rows;
    for (const auto& m : manifests) {
        TaskFiles files = read_manifest(m);
        SolvedTask solved = run_solver(files, sopts);
        Row row;
        row.problem = files.name;
        row.agents = solved.task.agent_count();
        row.coupling = coupling_level(solved.task);
        row.domain_actions = static_cast<int>(solved.task.actions.size());
        row.time = solved.seconds;
        if (solved.result.outcome == Outcome::Solution) {
            row.solved = true;
            ValidationReport rep = validate(*solved.result.plan, solved.task);
            row.valid = rep.valid;
            row.acts = rep.metrics.acts;
            row.ts = rep.metrics.time_steps;
            row.partics = rep.metrics.participants;
        }
        rows.push_back(row);
    }

    std::ostringstream csv;
    csv << "problem,agents,coupling,domain_actions,acts,ts,partics,time\n";
    for (const Row& r : rows) {
        csv << r.problem << ',' << r.agents << ',' << std::fixed
            << std::setprecision(1) << r.coupling << ',' << r.domain_actions
            << ',' << r.acts << ',' << r.ts << ',' << r.partics << ','
            << std::setprecision(3) << r.time << '\n';
    }
    if (!csv_file.empty()) {
        std::ofstream f(csv_file);
        f << csv.str();
    }
    std::cout << csv.str() << '\n';

    std::cout << std::left << std::setw(24) << "problem" << std::right
              << std::setw(8) << "agents" << std::setw(10) << "coupl%"
              << std::setw(8) << "domact" << std::setw(7) << "acts"
              << std::setw(6) << "ts" << std::setw(9) << "partics"
              << std::setw(10) << "time" << '\n';
    bool all_ok = true;
    for (const Row& r : rows) {
        std::cout << std::left << std::setw(24) << r.problem << std::right
                  << std::setw(8) << r.agents << std::setw(10) << std::fixed
                  << std::setprecision(1) << r.coupling << std::setw(8)
                  << r.domain_actions << std::setw(7) << r.acts << std::setw(6)
                  << r.ts << std::setw(9) << r.partics << std::setw(10)
                  << std::setprecision(3) << r.time
                  << (r.solved ? (r.valid ? "" : "  INVALID") : "  UNSOLVED")
                  << '\n';
        all_ok = all_ok && r.solved && r.valid;
    }
    return all_ok ? kExitSolved : kExitUnsolvable;
}

int cmd_gen(int n, const std::string& out_dir) {
    GeneratedTask g = generate_satellite_instance(n);
    fs::path manifest = write_generated(g, out_dir);
    std::cout << manifest.string() << '\n';
    return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mappop: cooperative multi-agent partial-order planner"};
    app.require_subcommand(1);

    TaskOptions topts;
    SolveOptions sopts;
    std::string out_file, plan_file, csv_file, gen_dir = "generated";
    std::vector<std::string> bench_inputs;
    int gen_n = 2;
    int simulations = 10;

    CLI::App* parse = app.add_subcommand("parse", "syntax-check the task files");
    add_task_options(parse, topts);

    CLI::App* ground = app.add_subcommand("ground", "dump per-agent ground actions");
    add_task_options(ground, topts);

    CLI::App* rpg = app.add_subcommand("rpg", "dump per-agent dis-RPGs");
    add_task_options(rpg, topts);
    rpg->add_flag("--parallel", sopts.parallel, "expand agents in parallel");

    CLI::App* solve = app.add_subcommand("solve", "plan and print the solution");
    add_task_options(solve, topts);
    add_solve_options(solve, sopts);
    solve->add_option("-o,--output", out_file, "also write the plan here");

    CLI::App* validate = app.add_subcommand("validate", "check a plan file");
    add_task_options(validate, topts);
    validate->add_option("plan", plan_file, "plan file")->required();
    validate->add_option("--simulations", simulations,
                         "linearizations to execute (0 disables)");
    validate->add_option("--seed", sopts.config.seed, "simulation seed");

    CLI::App* bench = app.add_subcommand("bench", "run a benchmark corpus");
    bench->add_option("inputs", bench_inputs, "task.json files or directories")
        ->required();
    add_solve_options(bench, sopts);
    bench->add_option("-o,--output", csv_file, "write the CSV here");

    CLI::App* gen = app.add_subcommand("gen", "generate a scaling-suite instance");
    gen->add_option("-n,--agents", gen_n, "agent count (1..14)")->required();
    gen->add_option("-o,--output", gen_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (parse->parsed())
            return cmd_parse(topts);
        if (ground->parsed())
            return cmd_ground(topts);
        if (rpg->parsed())
            return cmd_rpg(topts, sopts.parallel);
        if (solve->parsed())
            return cmd_solve(topts, sopts, out_file);
        if (validate->parsed())
            return cmd_validate(topts, plan_file, sopts.config.seed, simulations);
        if (bench->parsed())
            return cmd_bench(bench_inputs, sopts, csv_file);
        if (gen->parsed())
            return cmd_gen(gen_n, gen_dir);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SemanticError& e) {
        std::cerr << "semantic error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
