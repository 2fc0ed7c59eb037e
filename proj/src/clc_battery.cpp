#include "gridstor/clc_battery.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gridstor {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument("CLCParams: " + msg);
}

}  // namespace

void CLCParams::validate() const {
  require(eta_c > 0.0 && eta_c <= 1.0, "eta_c must be in (0, 1]");
  require(eta_d >= 1.0, "eta_d must be >= 1");
  require(v_nominal > 0.0, "v_nominal must be > 0");
  require(alpha_c_a > 0.0, "alpha_c_a must be > 0");
  require(alpha_d_a < 0.0, "alpha_d_a must be < 0");
  require(u1 < 0.0, "u1 must be < 0");
  require(u2 < 0.0, "u2 must be < 0");
  require(v1 >= 0.0, "v1 must be >= 0");
  require(v2 > v1, "v2 must be > v1");
  require(num_cells > 0, "num_cells must be > 0");
  require(initial_soc >= 0.0 && initial_soc <= 1.0, "initial_soc must be within [0, 1]");
}

PowerBounds clc_power_bounds(double b_wh, double d_s, const CLCParams& p) {
  const double n = static_cast<double>(p.num_cells);
  const double b_cell = b_wh / n;
  const double hours = d_s / kSecondsPerHour;

  // Current limits expressed as power at nominal voltage.
  const double p_min_current = p.alpha_d_a * p.v_nominal;
  const double p_max_current = p.alpha_c_a * p.v_nominal;

  // Power that lands the end-of-step energy exactly on the tilted bound.
  // Both denominators are negative (u1, u2 < 0), so the quotients carry the
  // right signs: <= 0 while b is above the lower bound, >= 0 below the upper.
  const double p_min_energy = (b_cell - p.v1) / (p.u1 / p.v_nominal - hours * p.eta_d);
  const double p_max_energy = (b_cell - p.v2) / (p.u2 / p.v_nominal - hours * p.eta_c);

  PowerBounds b;
  b.p_min_w = std::max(p_min_current, p_min_energy) * n;
  b.p_max_w = std::min(p_max_current, p_max_energy) * n;
  return b;
}

CLCUpdateResult clc_update(double b_wh, double requested_w, double d_s,
                           const CLCParams& p) {
  const PowerBounds bounds = clc_power_bounds(b_wh, d_s, p);
  CLCUpdateResult r;
  if (bounds.p_min_w > bounds.p_max_w) {
    // Inconsistent window (possible only for extreme parameter choices);
    // apply nothing rather than fail the step.
    r.degenerate_bounds = true;
    r.applied_w = 0.0;
  } else {
    r.applied_w = std::clamp(requested_w, bounds.p_min_w, bounds.p_max_w);
  }

  const double hours = d_s / kSecondsPerHour;
  const double eta = r.applied_w >= 0.0 ? p.eta_c : p.eta_d;
  const double n = static_cast<double>(p.num_cells);
  double b_new = b_wh + eta * r.applied_w * hours;
  // The bounds above guarantee b_new stays inside [v1*n, v2*n] analytically;
  // clamp only to shed rounding dust.
  b_new = std::clamp(b_new, p.v1 * n, p.v2 * n);

  r.b_new_wh = b_new;
  r.e_moved_wh = r.applied_w * hours;
  return r;
}

double fit_efficiency(double current_a, double r_internal_ohm, double v_nominal) {
  if (v_nominal <= 0.0) {
    throw std::invalid_argument("fit_efficiency: v_nominal must be > 0");
  }
  if (r_internal_ohm < 0.0) {
    throw std::invalid_argument("fit_efficiency: r_internal_ohm must be >= 0");
  }
  return 1.0 - current_a * r_internal_ohm / v_nominal;
}

CLCBattery::CLCBattery(CLCParams params) : params_(params) {
  params_.validate();
  const double n = static_cast<double>(params_.num_cells);
  b_wh_ = (params_.v1 + params_.initial_soc * (params_.v2 - params_.v1)) * n;
}

StorageResponse CLCBattery::update(PowerW requested, DurationS duration) {
  const CLCUpdateResult r = clc_update(b_wh_, requested.value, duration.value, params_);
  b_wh_ = r.b_new_wh;
  last_degenerate_ = r.degenerate_bounds;
  StorageResponse resp;
  resp.energy_moved = EnergyWh(r.e_moved_wh);
  resp.applied_power = PowerW(r.applied_w);
  resp.soc = soc();
  return resp;
}

Soc CLCBattery::soc() const {
  const double n = static_cast<double>(params_.num_cells);
  const double span = (params_.v2 - params_.v1) * n;
  return Soc::clamped((b_wh_ - params_.v1 * n) / span);
}

StorageState CLCBattery::state() const {
  return {{"b_wh", b_wh_}, {"bounds_degenerate", last_degenerate_ ? 1.0 : 0.0}};
}

}  // namespace gridstor
