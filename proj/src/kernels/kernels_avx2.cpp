// AVX2 variants of the pack kernels. Elementwise kernels replicate the
// scalar reference arithmetic operation for operation (no FMA), so results
// are bit-identical; reductions use 4-lane accumulators with a fixed lane
// combination order and are checked against the scalar reference to within
// accumulation-order tolerance.

#if defined(__AVX2__)

#include <immintrin.h>

#include "kernels_common.hpp"

namespace gridstor::kernels {

namespace {

void ocv_batch_avx2(const double* x, double scale, double* out, std::size_t n,
                    const OcvTableView& t) {
  if (!t.uniform || n < 4) {
    // Irregular knot spacing needs a per-element search; keep one code path
    // for it rather than vectorizing a binary search.
    ocv_batch_scalar(x, scale, out, n, t);
    return;
  }
  const std::size_t k = t.knots;
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d vfront = _mm256_set1_pd(t.soc[0]);
  const __m256d vback = _mm256_set1_pd(t.soc[k - 1]);
  const __m256d vuscale = _mm256_set1_pd(t.uniform_scale);
  const __m128i vmaxidx = _mm_set1_epi32(static_cast<int>(k - 2));

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_mul_pd(_mm256_loadu_pd(x + i), vscale);
    s = _mm256_max_pd(s, vfront);
    s = _mm256_min_pd(s, vback);
    const __m256d f = _mm256_mul_pd(_mm256_sub_pd(s, vfront), vuscale);
    __m128i idx = _mm256_cvttpd_epi32(f);
    idx = _mm_min_epi32(idx, vmaxidx);
    const __m256d s0 = _mm256_i32gather_pd(t.soc, idx, 8);
    const __m256d s1 = _mm256_i32gather_pd(t.soc + 1, idx, 8);
    const __m256d v0 = _mm256_i32gather_pd(t.ocv, idx, 8);
    const __m256d v1 = _mm256_i32gather_pd(t.ocv + 1, idx, 8);
    const __m256d num = _mm256_mul_pd(_mm256_sub_pd(s, s0), _mm256_sub_pd(v1, v0));
    const __m256d r = _mm256_add_pd(v0, _mm256_div_pd(num, _mm256_sub_pd(s1, s0)));
    _mm256_storeu_pd(out + i, r);
  }
  if (i < n) ocv_batch_scalar(x + i, scale, out + i, n - i, t);
}

void advance_charge_avx2(double* charge_ah, std::size_t n, double current_a,
                         double hours, double capacity_ah) {
  const double dq = current_a * hours;
  const __m256d vdq = _mm256_set1_pd(dq);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vcap = _mm256_set1_pd(capacity_ah);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d q = _mm256_add_pd(_mm256_loadu_pd(charge_ah + i), vdq);
    q = _mm256_max_pd(q, vzero);
    q = _mm256_min_pd(q, vcap);
    _mm256_storeu_pd(charge_ah + i, q);
  }
  if (i < n) advance_charge_scalar(charge_ah + i, n - i, current_a, hours, capacity_ah);
}

inline double hsum_ordered(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

void string_sums_avx2(const double* cell_ocv, const double* cell_r, std::size_t ns,
                      std::size_t np, double r_interconnect, double* emf_out,
                      double* res_out) {
  for (std::size_t s = 0; s < np; ++s) {
    const std::size_t base = s * ns;
    __m256d vemf = _mm256_setzero_pd();
    __m256d vres = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= ns; i += 4) {
      vemf = _mm256_add_pd(vemf, _mm256_loadu_pd(cell_ocv + base + i));
      vres = _mm256_add_pd(vres, _mm256_loadu_pd(cell_r + base + i));
    }
    double emf = hsum_ordered(vemf);
    double res = hsum_ordered(vres);
    for (; i < ns; ++i) {
      emf += cell_ocv[base + i];
      res += cell_r[base + i];
    }
    emf_out[s] = emf;
    res_out[s] = res + static_cast<double>(ns) * r_interconnect;
  }
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double total = hsum_ordered(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

MinMax minmax_avx2(const double* x, std::size_t n) {
  if (n < 4) return minmax_scalar(x, n);
  __m256d vmin = _mm256_loadu_pd(x);
  __m256d vmax = vmin;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    vmin = _mm256_min_pd(vmin, v);
    vmax = _mm256_max_pd(vmax, v);
  }
  alignas(32) double lo[4];
  alignas(32) double hi[4];
  _mm256_store_pd(lo, vmin);
  _mm256_store_pd(hi, vmax);
  MinMax r{lo[0], hi[0]};
  for (int l = 1; l < 4; ++l) {
    if (lo[l] < r.min_v) r.min_v = lo[l];
    if (hi[l] > r.max_v) r.max_v = hi[l];
  }
  for (; i < n; ++i) {
    if (x[i] < r.min_v) r.min_v = x[i];
    if (x[i] > r.max_v) r.max_v = x[i];
  }
  return r;
}

}  // namespace

const Impl& avx2_impl() {
  static const Impl impl{
      "avx2",           &ocv_batch_avx2, &advance_charge_avx2,
      &string_sums_avx2, &sum_avx2,      &minmax_avx2,
  };
  return impl;
}

}  // namespace gridstor::kernels

#endif  // __AVX2__
