#pragma once

#include <complex>
#include <cstddef>

namespace stftpr::kernels {

using Complex = std::complex<double>;

// Inner loops of every transform. All pointers address interleaved complex data.
struct KernelTable {
  const char* name;
  // sum_j a_j * b_j
  Complex (*dot)(const Complex* a, const Complex* b, std::size_t n);
  // out_j = a_j * conj(b_j)
  void (*mul_conj)(const Complex* a, const Complex* b, Complex* out, std::size_t n);
  // out_j = |a_j|^2
  void (*sq_mag)(const Complex* a, double* out, std::size_t n);
};

const KernelTable& scalar();
// null when the CPU (or the build) lacks the instruction set
const KernelTable* avx2();
const KernelTable* neon();

// Chosen once: best available, unless STFTPR_KERNELS=scalar is set.
const KernelTable& active();

}  // namespace stftpr::kernels
