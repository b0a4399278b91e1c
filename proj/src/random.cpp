#include "stftpr/random.hpp"

#include <cmath>
#include <numbers>

namespace stftpr {

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 e(seq);
  return Rng(e());
}

Complex Rng::gaussian() {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(eng_);
  const double im = n(eng_);
  return {re, im};
}

Complex Rng::unit() { return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)); }

double Rng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }

long Rng::integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }

bool Rng::coin(double p) { return std::bernoulli_distribution(p)(eng_); }

std::vector<Complex> random_vector(std::size_t n, Rng& rng) {
  std::vector<Complex> v(n);
  for (auto& x : v) x = rng.gaussian();
  return v;
}

CyclicSignal random_signal(std::size_t d, Rng& rng) { return CyclicSignal(random_vector(d, rng)); }

CyclicSignal random_on_support(std::size_t d, const std::vector<long>& support, Rng& rng) {
  CyclicSignal f = CyclicSignal::zeros(d);
  for (long j : support) f(j) = rng.gaussian();
  return f;
}

CyclicSignal random_short_window(std::size_t d, std::size_t L, Rng& rng) {
  CyclicSignal g = CyclicSignal::zeros(d);
  for (std::size_t j = 0; j <= L; ++j) g(j) = rng.gaussian();
  return g;
}

}  // namespace stftpr
