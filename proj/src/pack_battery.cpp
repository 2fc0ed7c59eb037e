#include "gridstor/pack_battery.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "gridstor/kernels.hpp"

namespace gridstor {

void HeterogeneityConfig::validate() const {
  if (!(soc_jitter >= 0.0 && soc_jitter <= 1.0)) {
    throw std::invalid_argument("HeterogeneityConfig: soc_jitter must be within [0, 1]");
  }
  if (!(r_jitter >= 0.0 && r_jitter < 1.0)) {
    throw std::invalid_argument("HeterogeneityConfig: r_jitter must be within [0, 1)");
  }
}

void PackTopology::validate() const {
  if (ns <= 0 || np <= 0) {
    throw std::invalid_argument("PackTopology: ns and np must be > 0, got " +
                                std::to_string(ns) + "x" + std::to_string(np));
  }
  if (!(r_interconnect_ohm >= 0.0)) {
    throw std::invalid_argument("PackTopology: r_interconnect_ohm must be >= 0");
  }
  if (heterogeneity) heterogeneity->validate();
}

PackSolveResult pack_solve(const std::vector<double>& emf_v,
                           const std::vector<double>& res_ohm, double p_pack_w) {
  if (emf_v.empty() || emf_v.size() != res_ohm.size()) {
    throw std::invalid_argument("pack_solve: emf/res sizes invalid");
  }
  double a = 0.0;  // sum of 1/R_s
  double b = 0.0;  // sum of E_s/R_s
  for (std::size_t s = 0; s < emf_v.size(); ++s) {
    if (!(res_ohm[s] > 0.0)) throw std::invalid_argument("pack_solve: string resistance must be > 0");
    if (!(emf_v[s] > 0.0)) throw std::invalid_argument("pack_solve: string EMF must be > 0");
    a += 1.0 / res_ohm[s];
    b += emf_v[s] / res_ohm[s];
  }

  // f(V) = (a*V - b)*V - p is a parabola whose upper root is the physical
  // terminal voltage; f' = 2aV - b.
  const auto f = [&](double v) { return (a * v - b) * v - p_pack_w; };
  const double tol = 1e-9 * std::max(1.0, std::abs(p_pack_w));
  const double v_oc = b / a;  // zero-current voltage

  double lo;
  double hi;
  if (p_pack_w >= 0.0) {
    lo = v_oc;  // f(lo) = -p <= 0
    double width = std::max(1e-3, 0.1 * v_oc);
    hi = v_oc + width;
    int guard = 0;
    while (f(hi) < 0.0) {
      width *= 2.0;
      hi = v_oc + width;
      if (++guard > 200) {
        throw std::runtime_error("pack_solve: failed to bracket the charge root");
      }
    }
  } else {
    const double v_vertex = b / (2.0 * a);
    if (f(v_vertex) > 0.0) {
      throw std::runtime_error(
          "pack_solve: power below deliverable minimum (requested " +
          std::to_string(p_pack_w) + " W)");
    }
    lo = v_vertex;  // f <= 0 at the vertex
    hi = v_oc;      // f(hi) = -p > 0
  }

  PackSolveResult out;
  double x = v_oc;
  double fx = f(x);
  while (std::abs(fx) > tol) {
    if (out.iterations >= 100) {
      throw std::runtime_error("pack_solve: no convergence after 100 iterations, residual " +
                               std::to_string(fx) + " W");
    }
    ++out.iterations;
    if (fx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double dfx = 2.0 * a * x - b;
    double next = dfx != 0.0 ? x - fx / dfx : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
    x = next;
    fx = f(x);
  }

  out.terminal_v = x;
  out.string_currents_a.resize(emf_v.size());
  double total = 0.0;
  for (std::size_t s = 0; s < emf_v.size(); ++s) {
    out.string_currents_a[s] = (x - emf_v[s]) / res_ohm[s];
    total += out.string_currents_a[s];
  }
  out.residual_w = total * x - p_pack_w;
  return out;
}

PackBattery::PackBattery(ECMParams cell, PackTopology topology)
    : params_(std::move(cell)), topo_(topology) {
  params_.validate();
  topo_.validate();
  n_ = static_cast<std::size_t>(topo_.num_cells());
  charge_ah_.assign(n_, params_.initial_soc * params_.capacity_ah);
  r_.assign(n_, params_.r_internal_ohm);
  ocv_.assign(n_, 0.0);
  emf_.assign(static_cast<std::size_t>(topo_.np), 0.0);
  res_.assign(static_cast<std::size_t>(topo_.np), 0.0);
  currents_.assign(static_cast<std::size_t>(topo_.np), 0.0);

  if (topo_.heterogeneity) {
    const HeterogeneityConfig& het = *topo_.heterogeneity;
    std::mt19937_64 rng(het.seed);
    std::uniform_real_distribution<double> soc_off(-het.soc_jitter, het.soc_jitter);
    std::uniform_real_distribution<double> r_off(-het.r_jitter, het.r_jitter);
    for (std::size_t i = 0; i < n_; ++i) {
      const double soc = std::clamp(params_.initial_soc + soc_off(rng), 0.0, 1.0);
      charge_ah_[i] = soc * params_.capacity_ah;
      r_[i] = params_.r_internal_ohm * (1.0 + r_off(rng));
    }
  }

  refresh_ocv();
  refresh_string_sums();
  terminal_v_ = zero_current_voltage();
}

void PackBattery::refresh_ocv() {
  kernels::active().ocv_batch(charge_ah_.data(), 1.0 / params_.capacity_ah, ocv_.data(),
                              n_, params_.ocv_table.view());
}

void PackBattery::refresh_string_sums() {
  kernels::active().string_sums(ocv_.data(), r_.data(),
                                static_cast<std::size_t>(topo_.ns),
                                static_cast<std::size_t>(topo_.np),
                                topo_.r_interconnect_ohm, emf_.data(), res_.data());
}

double PackBattery::zero_current_voltage() const {
  double a = 0.0;
  double b = 0.0;
  for (std::size_t s = 0; s < emf_.size(); ++s) {
    a += 1.0 / res_[s];
    b += emf_[s] / res_[s];
  }
  return b / a;
}

PowerBounds PackBattery::power_limits() const {
  std::size_t imin = 0;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n_; ++i) {
    if (ocv_[i] < ocv_[imin]) imin = i;
    if (ocv_[i] > ocv_[imax]) imax = i;
  }
  const PowerBounds lo = ecm_power_limits_raw(ocv_[imin], r_[imin], params_.i_charge_max_a,
                                              params_.i_discharge_max_a, params_.v_max,
                                              params_.v_min);
  const PowerBounds hi = ecm_power_limits_raw(ocv_[imax], r_[imax], params_.i_charge_max_a,
                                              params_.i_discharge_max_a, params_.v_max,
                                              params_.v_min);
  const double cells = static_cast<double>(n_);
  return {lo.p_min_w * cells, hi.p_max_w * cells};
}

StorageResponse PackBattery::update(PowerW requested, DurationS duration) {
  const double hours = hours_of(duration);
  const double cap = params_.capacity_ah;
  const std::size_t ns = static_cast<std::size_t>(topo_.ns);
  const std::size_t np = static_cast<std::size_t>(topo_.np);
  const kernels::Impl& k = kernels::active();

  refresh_ocv();
  refresh_string_sums();

  const PowerBounds lim = power_limits();
  double applied = std::clamp(requested.value, lim.p_min_w, lim.p_max_w);

  if (applied == 0.0) {
    std::fill(currents_.begin(), currents_.end(), 0.0);
    terminal_v_ = zero_current_voltage();
    last_iterations_ = 0;
    last_residual_w_ = 0.0;
  } else {
    const PackSolveResult sr = pack_solve(emf_, res_, applied);

    // Bound each string's current so no cell leaves [0, capacity], then
    // re-derive the power that was actually applied.
    double total_current = 0.0;
    for (std::size_t s = 0; s < np; ++s) {
      double cur = sr.string_currents_a[s];
      const kernels::MinMax mm = k.minmax(charge_ah_.data() + s * ns, ns);
      if (cur > 0.0) {
        cur = std::min(cur, (cap - mm.max_v) / hours);
      } else if (cur < 0.0) {
        cur = std::max(cur, -mm.min_v / hours);
      }
      currents_[s] = cur;
      total_current += cur;
    }
    double applied_actual = sr.terminal_v * total_current;
    const bool sign_flip = (requested.value >= 0.0 && applied_actual < 0.0) ||
                           (requested.value <= 0.0 && applied_actual > 0.0);
    if (sign_flip) {
      // Boundary clamps ate the whole request; apply nothing.
      std::fill(currents_.begin(), currents_.end(), 0.0);
      applied_actual = 0.0;
    } else {
      for (std::size_t s = 0; s < np; ++s) {
        k.advance_charge(charge_ah_.data() + s * ns, ns, currents_[s], hours, cap);
      }
    }
    applied = applied_actual;
    terminal_v_ = sr.terminal_v;
    last_iterations_ = sr.iterations;
    last_residual_w_ = sr.residual_w;
  }

  StorageResponse resp;
  resp.energy_moved = EnergyWh(applied * hours);
  resp.applied_power = PowerW(applied);
  resp.soc = soc();
  return resp;
}

Soc PackBattery::soc() const {
  const double total = kernels::active().sum(charge_ah_.data(), n_);
  return Soc::clamped(total / (static_cast<double>(n_) * params_.capacity_ah));
}

StorageState PackBattery::state() const {
  const std::size_t ns = static_cast<std::size_t>(topo_.ns);
  double v_min = 0.0;
  double v_max = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double v = ocv_[i] + currents_[i / ns] * r_[i];
    if (i == 0 || v < v_min) v_min = v;
    if (i == 0 || v > v_max) v_max = v;
  }
  return {{"min_cell_v", v_min},
          {"max_cell_v", v_max},
          {"cell_soc_mean", soc().value},
          {"terminal_v", terminal_v_}};
}

double PackBattery::cell_soc(std::size_t cell) const {
  return charge_ah_.at(cell) / params_.capacity_ah;
}

void PackBattery::set_cell_soc(std::size_t cell, double soc) {
  if (!(soc >= 0.0 && soc <= 1.0)) {
    throw std::invalid_argument("PackBattery::set_cell_soc: soc must be within [0, 1]");
  }
  charge_ah_.at(cell) = soc * params_.capacity_ah;
  refresh_ocv();
  refresh_string_sums();
  terminal_v_ = zero_current_voltage();
}

void PackBattery::set_cell_r(std::size_t cell, double r_ohm) {
  if (!(r_ohm > 0.0)) {
    throw std::invalid_argument("PackBattery::set_cell_r: r must be > 0");
  }
  r_.at(cell) = r_ohm;
  refresh_string_sums();
  terminal_v_ = zero_current_voltage();
}

}  // namespace gridstor
