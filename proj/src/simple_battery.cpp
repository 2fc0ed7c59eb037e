#include "gridstor/simple_battery.hpp"

#include <stdexcept>
#include <string>

namespace gridstor {

SimpleParams SimpleParams::total(double capacity_wh, double initial_soc) {
  SimpleParams p;
  p.capacity_wh = capacity_wh;
  p.initial_soc = initial_soc;
  p.validate();
  return p;
}

SimpleParams SimpleParams::from_cells(double cell_capacity_wh, int num_cells,
                                      double initial_soc) {
  if (num_cells <= 0) {
    throw std::invalid_argument("SimpleParams: num_cells must be > 0, got " +
                                std::to_string(num_cells));
  }
  SimpleParams p;
  p.capacity_wh = cell_capacity_wh * num_cells;
  p.initial_soc = initial_soc;
  p.validate();
  return p;
}

void SimpleParams::validate() const {
  detail::require_finite(capacity_wh, "SimpleParams.capacity_wh");
  if (capacity_wh <= 0.0) {
    throw std::invalid_argument("SimpleParams: capacity_wh must be > 0, got " +
                                std::to_string(capacity_wh));
  }
  detail::require_finite(initial_soc, "SimpleParams.initial_soc");
  if (initial_soc < 0.0 || initial_soc > 1.0) {
    throw std::invalid_argument("SimpleParams: initial_soc must be within [0, 1], got " +
                                std::to_string(initial_soc));
  }
}

SimpleUpdateResult simple_update(double b_prev_wh, double power_w, double duration_s,
                                 double capacity_wh) {
  const double e_request = power_w * duration_s / kSecondsPerHour;
  SimpleUpdateResult r;
  r.b_new_wh = b_prev_wh + e_request;
  r.e_moved_wh = e_request;
  if (r.b_new_wh > capacity_wh) {
    r.e_moved_wh = capacity_wh - b_prev_wh;
    r.b_new_wh = capacity_wh;
    r.boundary_hit = true;
  } else if (r.b_new_wh < 0.0) {
    r.e_moved_wh = -b_prev_wh;
    r.b_new_wh = 0.0;
    r.boundary_hit = true;
  }
  return r;
}

SimpleBattery::SimpleBattery(SimpleParams params) {
  params.validate();
  capacity_wh_ = params.capacity_wh;
  b_wh_ = params.initial_soc * params.capacity_wh;
}

StorageResponse SimpleBattery::update(PowerW requested, DurationS duration) {
  const SimpleUpdateResult r =
      simple_update(b_wh_, requested.value, duration.value, capacity_wh_);
  b_wh_ = r.b_new_wh;
  // When the step was cut short by a boundary, report the average power that
  // was actually sustainable over the step.
  const double applied_w =
      r.boundary_hit ? r.e_moved_wh * kSecondsPerHour / duration.value : requested.value;
  StorageResponse resp;
  resp.energy_moved = EnergyWh(r.e_moved_wh);
  resp.applied_power = PowerW(applied_w);
  resp.soc = soc();
  return resp;
}

Soc SimpleBattery::soc() const { return Soc::clamped(b_wh_ / capacity_wh_); }

StorageState SimpleBattery::state() const { return {{"b_wh", b_wh_}}; }

}  // namespace gridstor
