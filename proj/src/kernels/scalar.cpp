#include "stftpr/kernels.hpp"

namespace stftpr::kernels {
namespace {

// Same association order as the 4-wide vector kernels: two complex lanes,
// even/odd partial sums, folded at the end.
Complex dot_scalar(const Complex* a, const Complex* b, std::size_t n) {
  double rr[2] = {0, 0}, ii[2] = {0, 0}, ri[2] = {0, 0}, ir[2] = {0, 0};
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    for (int t = 0; t < 2; ++t) {
      const double ar = a[j + t].real(), ai = a[j + t].imag();
      const double br = b[j + t].real(), bi = b[j + t].imag();
      rr[t] += ar * br;
      ii[t] += ai * bi;
      ri[t] += ar * bi;
      ir[t] += ai * br;
    }
  }
  double re = (rr[0] + rr[1]) - (ii[0] + ii[1]);
  double im = (ri[0] + ri[1]) + (ir[0] + ir[1]);
  for (; j < n; ++j) {
    re += a[j].real() * b[j].real() - a[j].imag() * b[j].imag();
    im += a[j].real() * b[j].imag() + a[j].imag() * b[j].real();
  }
  return {re, im};
}

void mul_conj_scalar(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double ar = a[j].real(), ai = a[j].imag();
    const double br = b[j].real(), bi = b[j].imag();
    out[j] = {ar * br + ai * bi, ai * br - ar * bi};
  }
}

void sq_mag_scalar(const Complex* a, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j)
    out[j] = a[j].real() * a[j].real() + a[j].imag() * a[j].imag();
}

const KernelTable kScalar{"scalar", dot_scalar, mul_conj_scalar, sq_mag_scalar};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace stftpr::kernels
