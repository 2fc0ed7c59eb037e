#pragma once

#include <map>
#include <optional>
#include <string>

#include "gridstor/units.hpp"

namespace gridstor {

// Observable model internals, snapshotted once per step. Key sets are stable
// for a given model instance across a run so records can be tabulated.
using StorageState = std::map<std::string, double>;

// Charge/discharge power window the BMS allows from the current state.
struct PowerBounds {
  double p_min_w = 0.0;  // most negative allowed power (discharge side)
  double p_max_w = 0.0;  // most positive allowed power (charge side)
};

struct StorageResponse {
  EnergyWh energy_moved;  // signed energy actually moved this step, Wh
  PowerW applied_power;   // power after clipping to the model's limits
  Soc soc;                // state of charge after the step
};

struct ParamResult {
  bool ok = true;
  std::string error;
  static ParamResult success() { return {}; }
  static ParamResult failure(std::string msg) { return {false, std::move(msg)}; }
};

// Common interface for all storage models. A request outside the model's
// feasible window is clipped, never failed: the response reports what was
// actually applied. Requesting 0 W is always valid, including on a full or
// empty battery.
class Storage {
 public:
  virtual ~Storage() = default;

  // Charge (requested > 0) or discharge (requested < 0) for `duration`.
  virtual StorageResponse update(PowerW requested, DurationS duration) = 0;

  virtual Soc soc() const = 0;
  virtual StorageState state() const = 0;

  // Runtime-settable knobs. Models without any reject every key by default;
  // the error names the offending key.
  virtual ParamResult set_parameter(const std::string& key, double value);
  virtual std::optional<double> get_parameter(const std::string& key) const;

  virtual const char* model_name() const = 0;
};

}  // namespace gridstor
