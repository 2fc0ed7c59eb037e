#include "gridstor/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "gridstor/timeparse.hpp"

namespace gridstor {

Scenario build_scenario(const ScenarioConfig& config, const std::string& base_dir) {
  config.validate();

  Scenario s;
  s.config = config;
  s.start_time = parse_iso8601_utc(config.start_time_iso);
  s.step_seconds = static_cast<std::int64_t>(config.step_seconds);
  s.steps = static_cast<std::int64_t>(config.horizon_seconds / config.step_seconds);

  for (const ActorSpec& spec : config.actors) {
    s.actors.push_back(make_actor(spec, base_dir));
  }
  s.storage = make_storage(config.storage, base_dir);
  s.policy = std::make_unique<MicrogridPolicy>(config.policy);
  if (!config.schedule_events.empty()) {
    s.controllers.push_back(
        std::make_unique<ScheduleController>("schedule", config.schedule_events));
  }

  // Every failure mode that can be checked without stepping is checked here.
  ParamRouter router(*s.policy, *s.storage);
  for (const ScheduleEvent& ev : config.schedule_events) {
    if (!router.knows(ev.key)) {
      throw std::invalid_argument("scenario: schedule event targets unknown parameter '" +
                                  ev.key + "'");
    }
  }
  const std::int64_t last_step_time = s.start_time + (s.steps - 1) * s.step_seconds;
  for (const auto& actor : s.actors) {
    if (const auto cov = actor->coverage()) {
      if (s.start_time < cov->first || last_step_time > cov->second) {
        throw std::invalid_argument(
            "scenario: actor '" + actor->name() + "' trace covers [" +
            format_iso8601_utc(cov->first) + ", " + format_iso8601_utc(cov->second) +
            "] but the run needs [" + format_iso8601_utc(s.start_time) + ", " +
            format_iso8601_utc(last_step_time) + "]");
      }
    }
  }
  return s;
}

std::vector<StepRecord> run(Scenario& s) {
  std::vector<StepRecord> records;
  records.reserve(static_cast<std::size_t>(s.steps));

  ParamRouter router(*s.policy, *s.storage);
  const DurationS step(static_cast<double>(s.step_seconds));
  double last_e_grid_wh = 0.0;
  StorageState last_state;

  for (std::int64_t i = 0; i < s.steps; ++i) {
    const std::int64_t now = s.start_time + i * s.step_seconds;

    double p_delta_w = 0.0;
    for (const auto& actor : s.actors) {
      p_delta_w += actor->power_at(now).value;
    }

    for (const auto& controller : s.controllers) {
      controller->on_step(now, last_e_grid_wh, last_state, router);
    }

    StepRecord rec = s.policy->step(p_delta_w, step, *s.storage, now);
    last_e_grid_wh = rec.e_grid_wh;
    last_state = rec.state;
    records.push_back(std::move(rec));
  }
  return records;
}

RunSummary summarize(const std::vector<StepRecord>& records) {
  RunSummary sum;
  for (const StepRecord& r : records) {
    // e_grid_wh > 0 is surplus pushed to the grid; < 0 is energy drawn from it.
    if (r.e_grid_wh >= 0.0) {
      sum.export_wh += r.e_grid_wh;
    } else {
      sum.import_wh += -r.e_grid_wh;
    }
    sum.storage_net_wh += r.e_storage_wh;
  }
  sum.net_import_wh = sum.import_wh - sum.export_wh;
  if (!records.empty()) sum.final_soc = records.back().soc;
  return sum;
}

}  // namespace gridstor
