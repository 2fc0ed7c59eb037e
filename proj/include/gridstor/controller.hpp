#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridstor/policy.hpp"
#include "gridstor/storage.hpp"

namespace gridstor {

// Routes runtime parameter traffic: policy keys first, then the storage
// model's keys. Setting an unknown key fails with the key named.
class ParamRouter {
 public:
  ParamRouter(MicrogridPolicy& policy, Storage& storage)
      : policy_(&policy), storage_(&storage) {}

  ParamResult set(const std::string& key, double value);
  std::optional<double> get(const std::string& key) const;
  bool knows(const std::string& key) const;

 private:
  MicrogridPolicy* policy_;
  Storage* storage_;
};

// Controllers observe the previous step's outcome (one-step delay; zeros
// before the first step) and may adjust parameters before the step runs.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void on_step(std::int64_t now, double last_e_grid_wh,
                       const StorageState& last_state, ParamRouter& params) = 0;
  virtual const std::string& name() const = 0;
};

struct ScheduleEvent {
  std::int64_t start = 0;  // inclusive
  std::int64_t end = 0;    // exclusive
  std::string key;
  double value = 0.0;
};

// Applies timed parameter overrides: at a window's start the key is set to
// the event value; at its end the prior value is restored. Windows on the
// same key must not overlap.
class ScheduleController final : public Controller {
 public:
  ScheduleController(std::string name, std::vector<ScheduleEvent> events);

  void on_step(std::int64_t now, double last_e_grid_wh, const StorageState& last_state,
               ParamRouter& params) override;
  const std::string& name() const override { return name_; }

  const std::vector<ScheduleEvent>& events() const { return events_; }

 private:
  struct EventState {
    bool active = false;
    bool done = false;
    double prior = 0.0;
  };

  std::string name_;
  std::vector<ScheduleEvent> events_;
  std::vector<EventState> states_;
};

}  // namespace gridstor
