#pragma once

#include "clearnet/discrete_clearing.hpp"
#include "clearnet/harness.hpp"
#include "clearnet/scenario.hpp"
#include "clearnet/static_clearing.hpp"

#include <iosfwd>
#include <string>

namespace clearnet {

/// Parses the network block {"n": int, "L": [[...]], "names": [...]}.
/// Validation errors carry the JSON path of the offending value.
FinancialNetwork network_from_json(const std::string& text);

/// Parses a full scenario file; see README for the schema. Missing dynamic
/// fields fall back to defaults so the same file can drive the static,
/// discrete, and continuous subcommands.
ScenarioConfig scenario_from_json(const std::string& text);

/// Static problem from the same file: uses "x" when present, otherwise V0.
StaticProblem static_problem_from_json(const std::string& text);

/// Explicit per-date schedule from "steps": [{"c": [...], "L": [[...]]}, ...];
/// when absent, discretizes the scenario's processes onto "n_steps" dates
/// (default 10).
DiscreteSchedule discrete_schedule_from_json(const std::string& text);

std::string read_file(const std::string& path);

void write_static_csv(std::ostream& os, const FinancialNetwork& net, const StaticSolution& sol);
void write_discrete_csv(std::ostream& os, const DiscreteTrajectory& traj, bool emit_exposures);
void write_trajectory_csv(std::ostream& os, const std::vector<ContinuousState>& states);
void write_events_csv(std::ostream& os, const std::vector<WealthEvent>& events);
void write_samples_csv(std::ostream& os, const Mat& terminal_wealth);
std::string mc_summary_json(const ScenarioConfig& config, const McSummary& summary);

}  // namespace clearnet
