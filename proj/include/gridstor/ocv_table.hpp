#pragma once

#include <string>
#include <vector>

#include "gridstor/kernels.hpp"

namespace gridstor {

// Monotone piecewise-linear open-circuit-voltage curve over state of charge.
// Knots must strictly increase on both axes and the SoC axis must span
// exactly [0, 1]. Lookups clamp out-of-range inputs to the table edges.
class OcvTable {
 public:
  OcvTable(std::vector<double> soc_knots, std::vector<double> ocv_knots);

  double ocv_at(double soc) const;
  // Exact inverse of ocv_at on the table's voltage range (clamped outside).
  double soc_at(double ocv_v) const;

  const std::vector<double>& soc_knots() const { return soc_; }
  const std::vector<double>& ocv_knots() const { return ocv_; }
  double min_ocv_v() const { return ocv_.front(); }
  double max_ocv_v() const { return ocv_.back(); }
  // Trapezoidal average of ocv over soc in [0, 1].
  double mean_ocv_v() const;

  // Non-owning view for batch kernels; valid as long as this table lives.
  kernels::OcvTableView view() const;

  // Built-in curve for a 5 Ah NMC 21700 cell, calibrated so a 0.2C
  // constant-power discharge through a 53.24 mOhm series resistance delivers
  // 18.87 Wh. Identical to the data file shipped with the repository.
  static OcvTable default_nmc_21700();
  static constexpr const char* kDefaultVersion = "nmc21700-5ah-v1";

  // Loads a "soc,ocv" CSV (header required).
  static OcvTable from_csv(const std::string& path);

 private:
  std::vector<double> soc_;
  std::vector<double> ocv_;
  bool uniform_ = false;
  double uniform_scale_ = 0.0;
};

}  // namespace gridstor
