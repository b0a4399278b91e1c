#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "stftpr/signal.hpp"
#include "stftpr/spectral.hpp"

namespace stftpr {

// One engine per trial; seeds are derived, never shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial);

  Complex gaussian();
  Complex unit();  // uniform on the circle
  double uniform(double lo, double hi);
  long integer(long lo, long hi);  // inclusive
  bool coin(double p = 0.5);
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

CyclicSignal random_signal(std::size_t d, Rng& rng);
CyclicSignal random_on_support(std::size_t d, const std::vector<long>& support, Rng& rng);
// g_j nonzero exactly for j in {0..L}
CyclicSignal random_short_window(std::size_t d, std::size_t L, Rng& rng);
std::vector<Complex> random_vector(std::size_t n, Rng& rng);

}  // namespace stftpr
