#include <immintrin.h>

#include "stftpr/kernels.hpp"

namespace stftpr::kernels {

namespace {

// two complex doubles per register: [re0 im0 re1 im1]

Complex dot_avx2(const Complex* a, const Complex* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d same = _mm256_setzero_pd();   // ar*br | ai*bi
  __m256d cross = _mm256_setzero_pd();  // ar*bi | ai*br
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * j);
    __m256d vb = _mm256_loadu_pd(pb + 2 * j);
    __m256d vbs = _mm256_permute_pd(vb, 0b0101);
    same = _mm256_add_pd(same, _mm256_mul_pd(va, vb));
    cross = _mm256_add_pd(cross, _mm256_mul_pd(va, vbs));
  }
  alignas(32) double s[4], c[4];
  _mm256_store_pd(s, same);
  _mm256_store_pd(c, cross);
  double re = (s[0] + s[2]) - (s[1] + s[3]);
  double im = (c[0] + c[2]) + (c[1] + c[3]);
  for (; j < n; ++j) {
    re += a[j].real() * b[j].real() - a[j].imag() * b[j].imag();
    im += a[j].real() * b[j].imag() + a[j].imag() * b[j].real();
  }
  return {re, im};
}

void mul_conj_avx2(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * j);
    __m256d vb = _mm256_loadu_pd(pb + 2 * j);
    __m256d p1 = _mm256_mul_pd(va, vb);                              // ar*br, ai*bi
    __m256d p2 = _mm256_mul_pd(_mm256_permute_pd(va, 0b0101), vb);  // ai*br, ar*bi
    __m256d re = _mm256_hadd_pd(p1, p1);
    __m256d im = _mm256_hsub_pd(p2, p2);
    _mm256_storeu_pd(po + 2 * j, _mm256_blend_pd(re, im, 0b1010));
  }
  for (; j < n; ++j) {
    const double ar = a[j].real(), ai = a[j].imag();
    const double br = b[j].real(), bi = b[j].imag();
    out[j] = {ar * br + ai * bi, ai * br - ar * bi};
  }
}

void sq_mag_avx2(const Complex* a, double* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * j);
    __m256d sq = _mm256_mul_pd(va, va);
    __m256d h = _mm256_hadd_pd(sq, sq);  // |a0|^2 |a0|^2 |a1|^2 |a1|^2
    __m256d packed = _mm256_permute4x64_pd(h, 0b1000);
    _mm_storeu_pd(out + j, _mm256_castpd256_pd128(packed));
  }
  for (; j < n; ++j) out[j] = a[j].real() * a[j].real() + a[j].imag() * a[j].imag();
}

const KernelTable kAvx2{"avx2", dot_avx2, mul_conj_avx2, sq_mag_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace stftpr::kernels
