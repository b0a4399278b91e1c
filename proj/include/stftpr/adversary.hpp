#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stftpr/recovery.hpp"

namespace stftpr {

struct CounterexampleBundle {
  std::string family;
  CyclicSignal window;
  std::vector<CyclicSignal> signals;
  double max_measurement_gap = 0;  // relative to the largest measurement entry
  double pairwise_phase_err = 0;   // min over pairs
  std::vector<std::string> checks;  // extra structural checks that were run

  bool valid() const { return max_measurement_gap < 1e-9 && pairwise_phase_err > 1e-3; }
};

// fills the gap/distance fields; throws InvalidBundle when the predicate fails
void certify(CounterexampleBundle& b);

CounterexampleBundle periodic_family(std::size_t d, std::size_t L, std::size_t r);
CounterexampleBundle delta_pair_cyclic(long k, const CyclicSignal& g);
CounterexampleBundle delta_pair_line(long k, const SparseLine& g);
CounterexampleBundle real_even_pair(std::size_t d, const std::optional<CyclicSignal>& window,
                                    std::uint64_t seed = 0);
CounterexampleBundle small_d_witness(std::size_t d, long k, long l);

// some window whose ambiguity function vanishes at (k,l), d in {2,3}
CyclicSignal small_d_window(std::size_t d, long k, long l);

}  // namespace stftpr
