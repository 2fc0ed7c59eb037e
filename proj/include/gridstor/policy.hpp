#pragma once

#include <cstdint>
#include <optional>

#include "gridstor/storage.hpp"

namespace gridstor {

struct PolicyConfig {
  double min_soc = 0.0;                    // floor below which deficits go to the grid
  std::optional<double> charge_power_w;    // forced-charge directive, > 0 when set
  bool grid_connected = true;

  void validate() const;
};

// One engine step's observable outcome. For grid-connected runs the ledger
// identity e_grid_wh == p_delta_w * (d/3600) - e_storage_wh holds exactly as
// written (same expression, same operands). Islanded runs pin e_grid_wh to 0
// and account the imbalance in curtailed_wh / unmet_wh inside `state`.
struct StepRecord {
  std::int64_t time = 0;      // unix seconds at the step's start
  double p_delta_w = 0.0;     // production minus consumption
  double p_storage_w = 0.0;   // power actually applied to storage
  double e_storage_wh = 0.0;  // energy actually moved into/out of storage
  double e_grid_wh = 0.0;     // positive = exported to the grid, negative = imported
  double soc = 0.0;
  StorageState state;
};

// Self-consumption-first dispatch: surplus charges storage, deficits drain
// it while SoC is above min_soc, and whatever storage did not absorb or
// supply settles against the grid. A forced-charge directive overrides the
// request with a fixed charging power while set.
class MicrogridPolicy {
 public:
  explicit MicrogridPolicy(PolicyConfig config);

  StepRecord step(double p_delta_w, DurationS duration, Storage& storage,
                  std::int64_t time);

  ParamResult set_parameter(const std::string& key, double value);
  std::optional<double> get_parameter(const std::string& key) const;
  bool has_parameter(const std::string& key) const;

  const PolicyConfig& config() const { return config_; }

 private:
  PolicyConfig config_;
};

}  // namespace gridstor
