#include "gridstor/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace gridstor {

void PolicyConfig::validate() const {
  if (!(min_soc >= 0.0 && min_soc <= 1.0)) {
    throw std::invalid_argument("PolicyConfig: min_soc must be within [0, 1]");
  }
  if (charge_power_w && !(*charge_power_w > 0.0 && std::isfinite(*charge_power_w))) {
    throw std::invalid_argument("PolicyConfig: charge_power_w must be > 0 when set");
  }
}

MicrogridPolicy::MicrogridPolicy(PolicyConfig config) : config_(config) {
  config_.validate();
}

StepRecord MicrogridPolicy::step(double p_delta_w, DurationS duration, Storage& storage,
                                 std::int64_t time) {
  detail::require_finite(p_delta_w, "MicrogridPolicy: p_delta_w");

  // Decide what to ask of storage. The floor check uses the pre-step SoC, so
  // a discharging step may legitimately end slightly below min_soc.
  double request_w;
  if (config_.charge_power_w) {
    request_w = *config_.charge_power_w;
  } else if (p_delta_w >= 0.0) {
    request_w = p_delta_w;
  } else {
    request_w = storage.soc().value > config_.min_soc ? p_delta_w : 0.0;
  }

  const StorageResponse resp = storage.update(PowerW(request_w), duration);

  StepRecord rec;
  rec.time = time;
  rec.p_delta_w = p_delta_w;
  rec.p_storage_w = resp.applied_power.value;
  rec.e_storage_wh = resp.energy_moved.value;
  rec.soc = resp.soc.value;
  rec.state = storage.state();

  const double e_delta_wh = p_delta_w * hours_of(duration);
  if (config_.grid_connected) {
    rec.e_grid_wh = e_delta_wh - rec.e_storage_wh;
  } else {
    // Islanded: nothing settles against a grid. Surplus that storage could
    // not absorb is curtailed; deficit it could not cover goes unmet.
    rec.e_grid_wh = 0.0;
    const double imbalance_wh = e_delta_wh - rec.e_storage_wh;
    rec.state["curtailed_wh"] = imbalance_wh > 0.0 ? imbalance_wh : 0.0;
    rec.state["unmet_wh"] = imbalance_wh < 0.0 ? -imbalance_wh : 0.0;
  }
  return rec;
}

ParamResult MicrogridPolicy::set_parameter(const std::string& key, double value) {
  if (key == "min_soc") {
    if (!(value >= 0.0 && value <= 1.0)) {
      return ParamResult::failure("min_soc out of range [0, 1]: " + std::to_string(value));
    }
    config_.min_soc = value;
    return ParamResult::success();
  }
  if (key == "charge_power_w") {
    // 0 clears the directive; positive values set it.
    if (!(value >= 0.0) || !std::isfinite(value)) {
      return ParamResult::failure("charge_power_w must be >= 0 (0 clears): " +
                                  std::to_string(value));
    }
    if (value == 0.0) {
      config_.charge_power_w.reset();
    } else {
      config_.charge_power_w = value;
    }
    return ParamResult::success();
  }
  if (key == "grid_connected") {
    if (value != 0.0 && value != 1.0) {
      return ParamResult::failure("grid_connected must be 0 or 1: " + std::to_string(value));
    }
    config_.grid_connected = value == 1.0;
    return ParamResult::success();
  }
  return ParamResult::failure("unknown parameter: " + key);
}

std::optional<double> MicrogridPolicy::get_parameter(const std::string& key) const {
  if (key == "min_soc") return config_.min_soc;
  if (key == "charge_power_w") return config_.charge_power_w ? *config_.charge_power_w : 0.0;
  if (key == "grid_connected") return config_.grid_connected ? 1.0 : 0.0;
  return std::nullopt;
}

bool MicrogridPolicy::has_parameter(const std::string& key) const {
  return key == "min_soc" || key == "charge_power_w" || key == "grid_connected";
}

}  // namespace gridstor
