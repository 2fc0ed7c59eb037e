#pragma once

#include "gridstor/storage.hpp"

namespace gridstor {

// Constant-efficiency model with current-dependent linear energy limits.
// Charge stores eta_c of the applied energy; discharge drains eta_d times
// the delivered energy. The feasible energy band [v1, v2] tilts linearly
// with current (expressed below through power p = I * v_nominal), which is
// what slows charging near full and discharging near empty.
//
// Defaults are the product fit for a 5 Ah 21700 NMC cell (18.87 Wh usable
// at a 0.2C discharge).
struct CLCParams {
  double eta_c = 0.978;    // charge efficiency, in (0, 1]
  double eta_d = 1.014;    // discharge drain factor, >= 1
  double v_nominal = 3.63; // nominal cell voltage, V
  double alpha_c_a = 3.5;  // max charge current per cell, A (> 0)
  double alpha_d_a = -7.5; // max discharge current per cell, A (< 0)
  double u1 = -0.087;      // lower energy bound slope, Wh/A
  double v1 = 0.0;         // lower energy bound intercept, Wh
  double u2 = -1.326;      // upper energy bound slope, Wh/A
  double v2 = 19.14;       // upper energy bound intercept, Wh (zero-current capacity)
  int num_cells = 1;
  double initial_soc = 0.0;

  void validate() const;
  double pack_capacity_wh() const { return v2 * num_cells; }
};

// Feasible power window for one step: the intersection of the current limits
// with the powers that keep the stored energy inside the tilted band at the
// end of the step. Evaluated per cell on b/n, then scaled by num_cells.
PowerBounds clc_power_bounds(double b_wh, double d_s, const CLCParams& params);

struct CLCUpdateResult {
  double b_new_wh = 0.0;
  double applied_w = 0.0;
  double e_moved_wh = 0.0;
  bool degenerate_bounds = false;  // p_min > p_max; request forced to 0
};

CLCUpdateResult clc_update(double b_wh, double requested_w, double d_s,
                           const CLCParams& params);

// Efficiency equivalent of an ohmic drop at the given current: 1 - I*R/V.
// Charge currents (I > 0) give eta < 1, discharge currents give eta > 1.
double fit_efficiency(double current_a, double r_internal_ohm, double v_nominal);

class CLCBattery final : public Storage {
 public:
  explicit CLCBattery(CLCParams params);

  StorageResponse update(PowerW requested, DurationS duration) override;
  Soc soc() const override;
  StorageState state() const override;
  const char* model_name() const override { return "clc"; }

  double energy_wh() const { return b_wh_; }
  const CLCParams& params() const { return params_; }

 private:
  CLCParams params_;
  double b_wh_;
  bool last_degenerate_ = false;
};

}  // namespace gridstor
