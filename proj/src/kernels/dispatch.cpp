#include <cstdlib>
#include <cstring>

#include "stftpr/kernels.hpp"

namespace stftpr::kernels {

#ifdef STFTPR_HAVE_AVX2
const KernelTable* avx2_table();
#endif
#ifdef STFTPR_HAVE_NEON
const KernelTable* neon_table();
#endif

const KernelTable* avx2() {
#ifdef STFTPR_HAVE_AVX2
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return avx2_table();
#endif
  return nullptr;
}

const KernelTable* neon() {
#ifdef STFTPR_HAVE_NEON
  return neon_table();  // baseline on aarch64
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("STFTPR_KERNELS");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar();
    if (const KernelTable* t = avx2()) return t;
    if (const KernelTable* t = neon()) return t;
    return &scalar();
  }();
  return *chosen;
}

}  // namespace stftpr::kernels
