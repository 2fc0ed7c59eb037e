#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gridstor/actors.hpp"
#include "gridstor/controller.hpp"
#include "gridstor/policy.hpp"
#include "gridstor/storage.hpp"

namespace gridstor {

// Declarative scenario description, loadable from JSON. Unknown keys and
// invalid values are rejected at parse/build time, before any step runs.
struct ActorSpec {
  std::string type;  // "solar" | "datacenter" | "constant"
  std::string name;
  // solar
  std::string trace_path;
  double area_m2 = 0.0;
  double efficiency = 0.0;
  // datacenter
  std::vector<double> node_powers_w;
  double pue = 1.0;
  // constant
  double power_w = 0.0;
};

struct StorageSpec {
  std::string model = "simple";  // "simple" | "clc" | "ecm" | "pack"
  std::string params_json = "{}";
};

struct OutputSpec {
  std::string path = "scenario_out.csv";
  std::string format = "csv";  // "csv" | "jsonl"
};

struct ScenarioConfig {
  std::string name;
  std::string start_time_iso;
  double step_seconds = 60.0;
  double horizon_seconds = 0.0;
  std::vector<ActorSpec> actors;
  StorageSpec storage;
  PolicyConfig policy;
  std::vector<ScheduleEvent> schedule_events;
  OutputSpec output;

  static ScenarioConfig from_file(const std::string& path);
  static ScenarioConfig from_json_text(const std::string& text);
  void validate() const;
};

// Instantiates a storage model from its JSON parameter block. `base_dir`
// anchors any relative file paths inside the block.
std::unique_ptr<Storage> make_storage(const StorageSpec& spec, const std::string& base_dir);

std::unique_ptr<Actor> make_actor(const ActorSpec& spec, const std::string& base_dir);

}  // namespace gridstor
