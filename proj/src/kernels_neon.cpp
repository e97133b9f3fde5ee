#include "kernels_internal.hpp"

// NEON variants, 2 doubles per lane. AArch64 ships NEON unconditionally so no
// runtime probe is needed beyond the architecture itself.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace gm::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double l1_norm_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

double l1_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double sumsq_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s = std::fma(d, d, s);
  }
  return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void scale_neon(double* x, double alpha, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void mix_neon(double* d, const double* p, double alpha, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vd = vld1q_f64(d + i);
    const float64x2_t step = vsubq_f64(vld1q_f64(p + i), vd);
    vst1q_f64(d + i, vfmaq_f64(vd, va, step));
  }
  for (; i < n; ++i) d[i] = std::fma(alpha, p[i] - d[i], d[i]);
}

std::size_t argmax_neon(const double* x, std::size_t n) {
  if (n < 4) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (x[i] > x[best]) best = i;
    return best;
  }
  float64x2_t vmax = vld1q_f64(x);
  uint64x2_t vidx = {0, 1};
  uint64x2_t cur = vidx;
  const uint64x2_t two = vdupq_n_u64(2);
  std::size_t i = 2;
  for (; i + 2 <= n; i += 2) {
    cur = vaddq_u64(cur, two);
    const float64x2_t v = vld1q_f64(x + i);
    const uint64x2_t gt = vcgtq_f64(v, vmax);
    vmax = vbslq_f64(gt, v, vmax);
    vidx = vbslq_u64(gt, cur, vidx);
  }
  double vals[2];
  std::uint64_t idxs[2];
  vst1q_f64(vals, vmax);
  vst1q_u64(idxs, vidx);
  double best_val = vals[0];
  std::size_t best = idxs[0];
  if (vals[1] > best_val || (vals[1] == best_val && idxs[1] < best)) {
    best_val = vals[1];
    best = idxs[1];
  }
  for (; i < n; ++i) {
    if (x[i] > best_val) {
      best_val = x[i];
      best = i;
    }
  }
  return best;
}

}  // namespace

const Backend* neon_backend_or_null() {
  static const Backend backend{
      "neon",       dot_neon,        sum_neon,  l1_norm_neon,
      l1_diff_neon, sumsq_diff_neon, axpy_neon, scale_neon,
      mix_neon,     argmax_neon,
  };
  return &backend;
}

}  // namespace gm::kernels

#else

namespace gm::kernels {
const Backend* neon_backend_or_null() { return nullptr; }
}  // namespace gm::kernels

#endif
