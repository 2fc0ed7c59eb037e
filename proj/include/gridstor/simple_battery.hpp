#pragma once

#include "gridstor/storage.hpp"

namespace gridstor {

struct SimpleParams {
  double capacity_wh = 0.0;  // total usable energy, > 0
  double initial_soc = 0.0;

  static SimpleParams total(double capacity_wh, double initial_soc = 0.0);
  static SimpleParams from_cells(double cell_capacity_wh, int num_cells,
                                 double initial_soc = 0.0);
  void validate() const;
};

struct SimpleUpdateResult {
  double b_new_wh = 0.0;
  double e_moved_wh = 0.0;
  bool boundary_hit = false;
};

// Lossless linear step: b moves by p*d/3600 and is clamped into
// [0, capacity]. When a boundary is hit, e_moved is the part that fit
// (capacity - b_prev, or -b_prev), computed so that energy bookkeeping
// telescopes exactly over a trajectory.
SimpleUpdateResult simple_update(double b_prev_wh, double power_w, double duration_s,
                                 double capacity_wh);

// Ideal energy reservoir with no efficiency losses and no power limits; any
// finite power is accepted until a capacity boundary cuts the step short.
class SimpleBattery final : public Storage {
 public:
  explicit SimpleBattery(SimpleParams params);

  StorageResponse update(PowerW requested, DurationS duration) override;
  Soc soc() const override;
  StorageState state() const override;
  const char* model_name() const override { return "simple"; }

  double energy_wh() const { return b_wh_; }
  double capacity_wh() const { return capacity_wh_; }

 private:
  double capacity_wh_;
  double b_wh_;
};

}  // namespace gridstor
