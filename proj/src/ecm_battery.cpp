#include "gridstor/ecm_battery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gridstor {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument("ECMParams: " + msg);
}

}  // namespace

void ECMParams::validate() const {
  require(capacity_ah > 0.0, "capacity_ah must be > 0");
  require(r_internal_ohm > 0.0, "r_internal_ohm must be > 0");
  require(i_charge_max_a > 0.0, "i_charge_max_a must be > 0");
  require(i_discharge_max_a < 0.0, "i_discharge_max_a must be < 0");
  require(v_min > 0.0, "v_min must be > 0");
  require(v_max > v_min, "v_max must be > v_min");
  require(num_cells > 0, "num_cells must be > 0");
  require(initial_soc >= 0.0 && initial_soc <= 1.0, "initial_soc must be within [0, 1]");
}

double solve_current(double p_cell_w, double ocv_v, double r_ohm) {
  if (!(ocv_v > 0.0)) {
    throw std::invalid_argument("solve_current: ocv must be > 0");
  }
  if (r_ohm < 0.0) {
    throw std::invalid_argument("solve_current: r must be >= 0");
  }
  if (r_ohm == 0.0) return p_cell_w / ocv_v;
  const double disc = ocv_v * ocv_v + 4.0 * r_ohm * p_cell_w;
  if (disc < 0.0) {
    throw std::domain_error("solve_current: power below deliverable minimum (" +
                            std::to_string(p_cell_w) + " W at ocv " +
                            std::to_string(ocv_v) + " V)");
  }
  // Equivalent to (-ocv + sqrt(disc)) / (2r) but free of cancellation.
  return 2.0 * p_cell_w / (ocv_v + std::sqrt(disc));
}

PowerBounds ecm_power_limits_raw(double ocv_v, double r_ohm, double i_charge_max_a,
                                 double i_discharge_max_a, double v_max, double v_min) {
  PowerBounds b;

  // Discharge side: stay above the current cap and above the terminal floor.
  double iv = (v_min - ocv_v) / r_ohm;
  if (iv > 0.0) iv = 0.0;  // ocv at/below v_min: no discharge headroom
  const double i_min = std::max(i_discharge_max_a, iv);
  b.p_min_w = (ocv_v + i_min * r_ohm) * i_min;

  // Charge side: stay below the current cap and the terminal ceiling.
  double ic = (v_max - ocv_v) / r_ohm;
  if (ic < 0.0) ic = 0.0;  // ocv at/above v_max: no charge headroom
  const double i_max = std::min(i_charge_max_a, ic);
  b.p_max_w = (ocv_v + i_max * r_ohm) * i_max;

  return b;
}

PowerBounds ecm_power_limits(double ocv_v, const ECMParams& p) {
  return ecm_power_limits_raw(ocv_v, p.r_internal_ohm, p.i_charge_max_a,
                              p.i_discharge_max_a, p.v_max, p.v_min);
}

EcmBattery::EcmBattery(ECMParams params) : params_(std::move(params)) {
  params_.validate();
  charge_ah_ = params_.initial_soc * params_.capacity_ah;
  last_terminal_v_ = cell_ocv();
}

double EcmBattery::cell_ocv() const {
  return params_.ocv_table.ocv_at(charge_ah_ / params_.capacity_ah);
}

StorageResponse EcmBattery::update(PowerW requested, DurationS duration) {
  const double hours = hours_of(duration);
  const double n = static_cast<double>(params_.num_cells);
  const double r = params_.r_internal_ohm;
  const double cap = params_.capacity_ah;

  const double ocv = cell_ocv();
  const PowerBounds lim = ecm_power_limits(ocv, params_);
  double applied_cell = std::clamp(requested.value / n, lim.p_min_w, lim.p_max_w);
  double current = solve_current(applied_cell, ocv, r);

  double q_new = charge_ah_ + current * hours;
  if (q_new > cap) {
    // Land exactly on the boundary and report the power that gets there.
    current = (cap - charge_ah_) / hours;
    q_new = cap;
    applied_cell = (ocv + current * r) * current;
  } else if (q_new < 0.0) {
    current = -charge_ah_ / hours;
    q_new = 0.0;
    applied_cell = (ocv + current * r) * current;
  }

  charge_ah_ = q_new;
  last_current_a_ = current;
  last_terminal_v_ = ocv + current * r;

  const double applied_total = applied_cell * n;
  StorageResponse resp;
  resp.energy_moved = EnergyWh(applied_total * hours);
  resp.applied_power = PowerW(applied_total);
  resp.soc = soc();
  return resp;
}

Soc EcmBattery::soc() const {
  // Report SoC the way a BMS estimates it: through the OCV curve and back.
  const double est = params_.ocv_table.soc_at(cell_ocv());
  return Soc::clamped(est);
}

StorageState EcmBattery::state() const {
  return {{"charge_ah", charge_ah_},
          {"ocv_v", cell_ocv()},
          {"last_current_a", last_current_a_},
          {"terminal_v", last_terminal_v_}};
}

}  // namespace gridstor
