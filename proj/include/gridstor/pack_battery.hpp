#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gridstor/ecm_battery.hpp"
#include "gridstor/storage.hpp"

namespace gridstor {

// Optional per-cell spread applied at construction, seeded for repeatability.
struct HeterogeneityConfig {
  double soc_jitter = 0.0;  // absolute SoC offset, uniform in [-j, +j]
  double r_jitter = 0.0;    // relative resistance spread, uniform in [-j, +j]
  std::uint64_t seed = 0;

  void validate() const;
};

struct PackTopology {
  int ns = 16;  // cells in series per string
  int np = 16;  // parallel strings
  double r_interconnect_ohm = 0.001;  // per-joint resistance, one joint per cell
  std::optional<HeterogeneityConfig> heterogeneity;

  void validate() const;
  int num_cells() const { return ns * np; }
};

struct PackSolveResult {
  std::vector<double> string_currents_a;
  double terminal_v = 0.0;
  int iterations = 0;
  double residual_w = 0.0;
};

// Finds the pack terminal voltage V at which the parallel strings (each an
// EMF emf[s] behind resistance res[s]) collectively absorb p_pack_w:
//   sum_s (V - emf[s]) / res[s] * V = p_pack_w.
// Safeguarded Newton iteration with a bisection fallback, converging on the
// physical (upper) root; |residual| <= 1e-9 * max(1, |p_pack_w|). Throws
// std::runtime_error if 100 iterations don't converge or no root exists.
PackSolveResult pack_solve(const std::vector<double>& emf_v,
                           const std::vector<double>& res_ohm, double p_pack_w);

// Battery pack of ns x np identical-parameter cells (optionally jittered),
// each an OCV-behind-resistance cell. One network solve per step couples the
// strings; cells within a string share the string current.
class PackBattery final : public Storage {
 public:
  PackBattery(ECMParams cell, PackTopology topology);

  StorageResponse update(PowerW requested, DurationS duration) override;
  Soc soc() const override;
  StorageState state() const override;
  const char* model_name() const override { return "pack"; }

  // Pack-level power window: per-cell limits evaluated at the most-charged
  // cell (charge side) and least-charged cell (discharge side), scaled by
  // the cell count. Conservative for the remaining cells.
  PowerBounds power_limits() const;

  int ns() const { return topo_.ns; }
  int np() const { return topo_.np; }
  int num_cells() const { return topo_.num_cells(); }
  double cell_soc(std::size_t cell) const;
  void set_cell_soc(std::size_t cell, double soc);
  double cell_r(std::size_t cell) const { return r_[cell]; }
  void set_cell_r(std::size_t cell, double r_ohm);
  double terminal_v() const { return terminal_v_; }
  const std::vector<double>& string_currents_a() const { return currents_; }
  int last_iterations() const { return last_iterations_; }
  double last_residual_w() const { return last_residual_w_; }
  const ECMParams& cell_params() const { return params_; }

 private:
  void refresh_ocv();
  void refresh_string_sums();
  double zero_current_voltage() const;

  ECMParams params_;
  PackTopology topo_;
  std::size_t n_;
  std::vector<double> charge_ah_;  // string-major: cell i of string s at s*ns+i
  std::vector<double> r_;
  std::vector<double> ocv_;        // OCVs used by the most recent solve
  std::vector<double> emf_;        // per string
  std::vector<double> res_;        // per string
  std::vector<double> currents_;   // per string, after coulomb bounding
  double terminal_v_;
  int last_iterations_ = 0;
  double last_residual_w_ = 0.0;
};

}  // namespace gridstor
