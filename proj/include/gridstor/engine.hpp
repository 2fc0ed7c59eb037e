#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gridstor/scenario.hpp"

namespace gridstor {

// A scenario instantiated and ready to run.
struct Scenario {
  ScenarioConfig config;
  std::vector<std::unique_ptr<Actor>> actors;
  std::unique_ptr<Storage> storage;
  std::unique_ptr<MicrogridPolicy> policy;
  std::vector<std::unique_ptr<Controller>> controllers;
  std::int64_t start_time = 0;
  std::int64_t step_seconds = 60;
  std::int64_t steps = 0;
};

// Builds all runtime objects and front-loads every validation that can fail:
// config shape, model parameters, controller keys, trace coverage. Throws
// before any step executes.
Scenario build_scenario(const ScenarioConfig& config, const std::string& base_dir);

// Steps the scenario over its horizon. Each step: actors are evaluated at
// the step's start time and summed into p_delta, controllers observe the
// previous step's outcome and may adjust parameters, then the policy
// dispatches storage and settles the remainder against the grid.
std::vector<StepRecord> run(Scenario& scenario);

// Net grid energy totals over a run. Positive e_grid records are exports
// (surplus pushed to the grid), negative ones are imports.
struct RunSummary {
  double import_wh = 0.0;      // sum of -e_grid over records with e_grid < 0
  double export_wh = 0.0;      // sum of e_grid over records with e_grid > 0
  double net_import_wh = 0.0;  // import - export
  double storage_net_wh = 0.0; // sum of e_storage
  double final_soc = 0.0;
};

RunSummary summarize(const std::vector<StepRecord>& records);

}  // namespace gridstor
