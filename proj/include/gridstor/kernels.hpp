#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Per-cell compute kernels used by the pack model's inner loops. A scalar
// reference implementation always exists; SIMD variants (AVX2 on x86-64) are
// compiled separately and selected at runtime based on CPU support. All
// variants are equivalence-tested against the scalar reference: elementwise
// kernels match bit for bit, reductions to within accumulation-order noise.

namespace gridstor::kernels {

// Non-owning view of a monotone piecewise-linear SoC -> OCV table.
struct OcvTableView {
  const double* soc = nullptr;
  const double* ocv = nullptr;
  std::size_t knots = 0;
  bool uniform = false;         // equally spaced soc knots
  double uniform_scale = 0.0;   // (knots-1) / (soc[knots-1] - soc[0])
};

struct MinMax {
  double min_v = 0.0;
  double max_v = 0.0;
};

struct Impl {
  const char* name;

  // out[i] = table value at clamp(x[i] * scale) for i in [0, n).
  void (*ocv_batch)(const double* x, double scale, double* out, std::size_t n,
                    const OcvTableView& table);

  // charge[i] = clamp(charge[i] + current_a * hours, 0, capacity_ah).
  void (*advance_charge)(double* charge_ah, std::size_t n, double current_a,
                         double hours, double capacity_ah);

  // Per string s in [0, np): emf[s] = sum of cell_ocv over its ns cells,
  // res[s] = sum of cell_r over the same cells + ns * r_interconnect.
  // Cell layout is string-major: cell i of string s lives at index s*ns + i.
  void (*string_sums)(const double* cell_ocv, const double* cell_r, std::size_t ns,
                      std::size_t np, double r_interconnect, double* emf_out,
                      double* res_out);

  double (*sum)(const double* x, std::size_t n);

  MinMax (*minmax)(const double* x, std::size_t n);  // n >= 1
};

// The scalar reference implementation (always available).
const Impl& scalar_impl();

// Implementation currently in use. Defaults to the best available variant.
const Impl& active();

// Force an implementation by name: "auto", "scalar", or a SIMD variant name.
// Returns false (and leaves the selection unchanged) if the name is unknown,
// not compiled in, or unsupported on this CPU.
bool select(const std::string& name);

// Lookup by name; nullptr if unavailable. "scalar" always succeeds.
const Impl* find(const std::string& name);

// Names of all implementations usable on this machine.
std::vector<std::string> available();

}  // namespace gridstor::kernels
