#pragma once

#include "gridstor/ocv_table.hpp"
#include "gridstor/storage.hpp"

namespace gridstor {

// Single-cell equivalent-circuit model: an OCV source behind a series
// internal resistance, driven by power. Charge is tracked by coulomb
// counting; the BMS window enforces both the per-cell current caps and the
// terminal-voltage limits.
struct ECMParams {
  double capacity_ah = 5.0;
  double r_internal_ohm = 0.05324;  // (1 - 0.978) * 3.63 / 1.5
  double i_charge_max_a = 3.5;
  double i_discharge_max_a = -7.5;
  double v_max = 4.2;
  double v_min = 2.5;
  int num_cells = 1;  // identical cells share the request evenly
  double initial_soc = 0.0;
  OcvTable ocv_table = OcvTable::default_nmc_21700();

  void validate() const;
};

// Current that moves power p through an OCV source with series resistance r:
// the physical root of r*I^2 + ocv*I - p = 0 (terminal voltage stays
// positive). Evaluated in a cancellation-free form; throws std::domain_error
// when p is below the deliverable minimum (negative discriminant), which is
// unreachable for power already clipped to the BMS window.
double solve_current(double p_cell_w, double ocv_v, double r_ohm);

// Per-cell power window at the given OCV: current caps intersected with the
// currents that land the terminal voltage exactly on v_min / v_max.
PowerBounds ecm_power_limits(double ocv_v, const ECMParams& params);
PowerBounds ecm_power_limits_raw(double ocv_v, double r_ohm, double i_charge_max_a,
                                 double i_discharge_max_a, double v_max, double v_min);

class EcmBattery final : public Storage {
 public:
  explicit EcmBattery(ECMParams params);

  StorageResponse update(PowerW requested, DurationS duration) override;
  Soc soc() const override;
  StorageState state() const override;
  const char* model_name() const override { return "ecm"; }

  double charge_ah() const { return charge_ah_; }
  double last_current_a() const { return last_current_a_; }
  double last_terminal_v() const { return last_terminal_v_; }
  const ECMParams& params() const { return params_; }

 private:
  double cell_ocv() const;

  ECMParams params_;
  double charge_ah_;
  double last_current_a_ = 0.0;
  double last_terminal_v_;
};

}  // namespace gridstor
