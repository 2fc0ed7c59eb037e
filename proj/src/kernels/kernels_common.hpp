#pragma once

#include <algorithm>
#include <cstddef>

#include "gridstor/kernels.hpp"

// Shared scalar building blocks. The SIMD variants mirror this arithmetic
// operation for operation (same order, no fused multiply-add) so that
// elementwise kernels agree with the scalar reference bit for bit.

namespace gridstor::kernels {

inline double ocv_interp_one(double soc_raw, const OcvTableView& t) {
  const std::size_t k = t.knots;
  double s = soc_raw;
  if (s < t.soc[0]) s = t.soc[0];
  if (s > t.soc[k - 1]) s = t.soc[k - 1];
  std::size_t i;
  if (t.uniform) {
    const double f = (s - t.soc[0]) * t.uniform_scale;
    i = static_cast<std::size_t>(f);
    if (i > k - 2) i = k - 2;
  } else {
    const double* pos = std::upper_bound(t.soc, t.soc + k, s);
    i = static_cast<std::size_t>(pos - t.soc);
    i = (i == 0) ? 0 : i - 1;
    if (i > k - 2) i = k - 2;
  }
  const double s0 = t.soc[i];
  const double s1 = t.soc[i + 1];
  const double v0 = t.ocv[i];
  const double v1 = t.ocv[i + 1];
  return v0 + (s - s0) * (v1 - v0) / (s1 - s0);
}

inline void ocv_batch_scalar(const double* x, double scale, double* out, std::size_t n,
                             const OcvTableView& table) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ocv_interp_one(x[i] * scale, table);
  }
}

inline void advance_charge_scalar(double* charge_ah, std::size_t n, double current_a,
                                  double hours, double capacity_ah) {
  const double dq = current_a * hours;
  for (std::size_t i = 0; i < n; ++i) {
    double q = charge_ah[i] + dq;
    if (q < 0.0) q = 0.0;
    if (q > capacity_ah) q = capacity_ah;
    charge_ah[i] = q;
  }
}

inline void string_sums_scalar(const double* cell_ocv, const double* cell_r,
                               std::size_t ns, std::size_t np, double r_interconnect,
                               double* emf_out, double* res_out) {
  for (std::size_t s = 0; s < np; ++s) {
    const std::size_t base = s * ns;
    double emf = 0.0;
    double res = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
      emf += cell_ocv[base + i];
      res += cell_r[base + i];
    }
    emf_out[s] = emf;
    res_out[s] = res + static_cast<double>(ns) * r_interconnect;
  }
}

inline double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

inline MinMax minmax_scalar(const double* x, std::size_t n) {
  MinMax r{x[0], x[0]};
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] < r.min_v) r.min_v = x[i];
    if (x[i] > r.max_v) r.max_v = x[i];
  }
  return r;
}

}  // namespace gridstor::kernels
