#include <arm_neon.h>

#include "stftpr/kernels.hpp"

namespace stftpr::kernels {

namespace {

// one complex double per register; two accumulators mirror the 2-lane order
Complex dot_neon(const Complex* a, const Complex* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  float64x2_t same[2] = {vdupq_n_f64(0), vdupq_n_f64(0)};
  float64x2_t cross[2] = {vdupq_n_f64(0), vdupq_n_f64(0)};
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    for (int t = 0; t < 2; ++t) {
      float64x2_t va = vld1q_f64(pa + 2 * (j + t));
      float64x2_t vb = vld1q_f64(pb + 2 * (j + t));
      float64x2_t vbs = vextq_f64(vb, vb, 1);
      same[t] = vaddq_f64(same[t], vmulq_f64(va, vb));
      cross[t] = vaddq_f64(cross[t], vmulq_f64(va, vbs));
    }
  }
  double re = (vgetq_lane_f64(same[0], 0) + vgetq_lane_f64(same[1], 0)) -
              (vgetq_lane_f64(same[0], 1) + vgetq_lane_f64(same[1], 1));
  double im = (vgetq_lane_f64(cross[0], 0) + vgetq_lane_f64(cross[1], 0)) +
              (vgetq_lane_f64(cross[0], 1) + vgetq_lane_f64(cross[1], 1));
  for (; j < n; ++j) {
    re += a[j].real() * b[j].real() - a[j].imag() * b[j].imag();
    im += a[j].real() * b[j].imag() + a[j].imag() * b[j].real();
  }
  return {re, im};
}

void mul_conj_neon(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  for (std::size_t j = 0; j < n; ++j) {
    float64x2_t va = vld1q_f64(pa + 2 * j);
    float64x2_t vb = vld1q_f64(pb + 2 * j);
    float64x2_t p1 = vmulq_f64(va, vb);
    float64x2_t p2 = vmulq_f64(vextq_f64(va, va, 1), vb);
    double re = vgetq_lane_f64(p1, 0) + vgetq_lane_f64(p1, 1);
    double im = vgetq_lane_f64(p2, 0) - vgetq_lane_f64(p2, 1);
    po[2 * j] = re;
    po[2 * j + 1] = im;
  }
}

void sq_mag_neon(const Complex* a, double* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  for (std::size_t j = 0; j < n; ++j) {
    float64x2_t va = vld1q_f64(pa + 2 * j);
    out[j] = vaddvq_f64(vmulq_f64(va, va));
  }
}

const KernelTable kNeon{"neon", dot_neon, mul_conj_neon, sq_mag_neon};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

}  // namespace stftpr::kernels
