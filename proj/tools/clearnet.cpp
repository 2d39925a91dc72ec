// clearnet — clearing and contagion simulations on interbank networks.
//
// Subcommands:
//   static      solve the single-date clearing problem
//   discrete    run the rolling-debt clearing recursion
//   continuous  simulate one path of the differential clearing system
//   mc          Monte-Carlo batch of continuous paths
//   suite       run the built-in regression scenarios

#include "clearnet/harness.hpp"
#include "clearnet/scenario_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace clearnet;

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    return out;
}

fs::path out_dir(const std::string& out) {
    fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
    fs::create_directories(dir);
    return dir;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int run_static(const std::string& config_path, const std::string& out) {
    const std::string text = read_file(config_path);
    const StaticProblem prob = static_problem_from_json(text);
    const FinancialNetwork net = network_from_json(text);
    const StaticSolution sol = clear_static(prob);
    print_warnings(sol.warnings);
    if (out.empty()) {
        write_static_csv(std::cout, net, sol);
    } else {
        auto os = open_out(out);
        write_static_csv(os, net, sol);
        std::cerr << "wrote " << out << '\n';
    }
    return 0;
}

int run_discrete_cmd(const std::string& config_path, const std::string& out, bool emit_exposures) {
    const DiscreteSchedule sched = discrete_schedule_from_json(read_file(config_path));
    const DiscreteTrajectory traj = run_discrete(sched);
    print_warnings(traj.warnings);
    if (out.empty()) {
        write_discrete_csv(std::cout, traj, emit_exposures);
    } else {
        auto os = open_out(out);
        write_discrete_csv(os, traj, emit_exposures);
        std::cerr << "wrote " << out << '\n';
    }
    return 0;
}

int run_continuous(ScenarioConfig cfg, const std::string& out) {
    PathOptions opts;
    opts.record_trajectory = true;
    const PathResult path = simulate_path(cfg, 0, opts);
    print_warnings(path.warnings);
    const fs::path dir = out_dir(out);
    {
        auto os = open_out(dir / "trajectory.csv");
        write_trajectory_csv(os, path.trajectory);
    }
    {
        auto os = open_out(dir / "events.csv");
        write_events_csv(os, path.events);
    }
    std::cerr << "wrote " << (dir / "trajectory.csv") << " and " << (dir / "events.csv") << " ("
              << path.steps << " steps)\n";
    return 0;
}

int run_mc(const ScenarioConfig& cfg, const std::string& out) {
    const McSummary summary = run_monte_carlo(cfg);
    print_warnings(summary.warnings);
    const fs::path dir = out_dir(out);
    {
        auto os = open_out(dir / "summary.json");
        os << mc_summary_json(cfg, summary) << '\n';
    }
    {
        auto os = open_out(dir / "samples.csv");
        write_samples_csv(os, summary.terminal_wealth);
    }
    std::cerr << "wrote " << (dir / "summary.json") << " and " << (dir / "samples.csv") << '\n';
    std::cout << mc_summary_json(cfg, summary) << '\n';
    return 0;
}

int run_suite(bool quick) {
    const SuiteReport report = run_scenario_suite(quick);
    for (const auto& e : report.entries) {
        std::cout << (e.pass ? "[PASS] " : "[FAIL] ") << e.name << ": " << e.measured << '\n';
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clearing and contagion simulations on interbank networks"};
    app.require_subcommand(1);

    std::string config_path, out;
    double dt_override = -1.0;
    long long seed_override = -1;
    int paths_override = -1;
    bool emit_exposures = false;
    bool quick = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "scenario JSON file");
        if (needs_config) opt->required();
        cmd->add_option("--out", out, "output file or directory");
    };

    auto* cmd_static = app.add_subcommand("static", "single-date clearing solution");
    add_common(cmd_static, true);

    auto* cmd_discrete = app.add_subcommand("discrete", "rolling-debt clearing recursion");
    add_common(cmd_discrete, true);
    cmd_discrete->add_flag("--emit-exposures", emit_exposures, "append flattened exposure rows");

    auto* cmd_continuous = app.add_subcommand("continuous", "one path of the differential system");
    add_common(cmd_continuous, true);
    cmd_continuous->add_option("--dt", dt_override, "base step size");
    cmd_continuous->add_option("--seed", seed_override, "RNG seed");

    auto* cmd_mc = app.add_subcommand("mc", "Monte-Carlo batch of continuous paths");
    add_common(cmd_mc, true);
    cmd_mc->add_option("--dt", dt_override, "base step size");
    cmd_mc->add_option("--seed", seed_override, "RNG seed");
    cmd_mc->add_option("--paths", paths_override, "number of paths");

    auto* cmd_suite = app.add_subcommand("suite", "built-in regression scenarios");
    cmd_suite->add_flag("--quick", quick, "smaller path counts and sweeps");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_static->parsed()) return run_static(config_path, out);
        if (cmd_discrete->parsed()) return run_discrete_cmd(config_path, out, emit_exposures);
        if (cmd_continuous->parsed() || cmd_mc->parsed()) {
            ScenarioConfig cfg = scenario_from_json(read_file(config_path));
            if (dt_override > 0.0) cfg.dt0 = dt_override;
            if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
            if (paths_override > 0) cfg.n_paths = paths_override;
            print_warnings(cfg.validate());
            return cmd_continuous->parsed() ? run_continuous(cfg, out) : run_mc(cfg, out);
        }
        if (cmd_suite->parsed()) return run_suite(quick);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
