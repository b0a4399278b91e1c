#include <cmath>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "stftpr/kernels.hpp"
#include "stftpr/random.hpp"

using namespace stftpr;
namespace kn = stftpr::kernels;

namespace {

std::vector<const kn::KernelTable*> simd_tables() {
  std::vector<const kn::KernelTable*> out;
  if (auto* t = kn::avx2()) out.push_back(t);
  if (auto* t = kn::neon()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("scalar kernels compute their definitions") {
  const std::vector<Complex> a{{1, 2}, {3, -1}, {0, 0.5}};
  const std::vector<Complex> b{{2, 0}, {-1, 1}, {4, 4}};
  const auto& s = kn::scalar();
  const Complex dot = s.dot(a.data(), b.data(), a.size());
  CHECK(dot == Complex(2, 4) + Complex(3, -1) * Complex(-1, 1) + Complex(0, 0.5) * Complex(4, 4));
  std::vector<Complex> mc(3);
  s.mul_conj(a.data(), b.data(), mc.data(), 3);
  for (int j = 0; j < 3; ++j) CHECK(mc[j] == a[j] * std::conj(b[j]));
  std::vector<double> sq(3);
  s.sq_mag(a.data(), sq.data(), 3);
  CHECK(sq[0] == 5.0);
  CHECK(sq[1] == 10.0);
  CHECK(sq[2] == 0.25);
  CHECK(s.dot(a.data(), b.data(), 0) == Complex(0));
}

TEST_CASE("SIMD kernels agree with the scalar reference bit for bit") {
  const auto tables = simd_tables();
  if (tables.empty()) {
    MESSAGE("no SIMD kernel available on this machine; nothing to compare");
    return;
  }
  Rng rng(99);
  for (const auto* t : tables) {
    CAPTURE(t->name);
    for (std::size_t n = 0; n <= 67; ++n) {
      CAPTURE(n);
      const auto a = random_vector(n, rng), b = random_vector(n, rng);
      const Complex ds = kn::scalar().dot(a.data(), b.data(), n);
      const Complex dv = t->dot(a.data(), b.data(), n);
      CHECK(ds == dv);
      std::vector<Complex> ms(n), mv(n);
      kn::scalar().mul_conj(a.data(), b.data(), ms.data(), n);
      t->mul_conj(a.data(), b.data(), mv.data(), n);
      CHECK(std::memcmp(ms.data(), mv.data(), n * sizeof(Complex)) == 0);
      std::vector<double> ss(n), sv(n);
      kn::scalar().sq_mag(a.data(), ss.data(), n);
      t->sq_mag(a.data(), sv.data(), n);
      CHECK(std::memcmp(ss.data(), sv.data(), n * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("SIMD kernels tolerate unaligned offsets and in-place output") {
  for (const auto* t : simd_tables()) {
    Rng rng(5);
    auto a = random_vector(40, rng);
    const auto b = random_vector(40, rng);
    std::vector<Complex> expect(39);
    kn::scalar().mul_conj(a.data() + 1, b.data() + 1, expect.data(), 39);
    t->mul_conj(a.data() + 1, b.data() + 1, a.data() + 1, 39);
    for (int j = 0; j < 39; ++j) CHECK(a[j + 1] == expect[j]);
  }
}

TEST_CASE("active table is one of the known tables") {
  const auto& act = kn::active();
  const bool known = &act == &kn::scalar() || &act == kn::avx2() || &act == kn::neon();
  CHECK(known);
  if (const char* env = std::getenv("STFTPR_KERNELS"); env && std::strcmp(env, "scalar") == 0)
    CHECK(&act == &kn::scalar());
}
