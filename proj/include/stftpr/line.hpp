#pragma once

#include <map>
#include <vector>

#include "stftpr/recovery.hpp"

namespace stftpr {

// Finite-support signals on the integers, handled inside a cyclic embedding
// large enough that no correlation wraps. The signal is assumed to live in
// embedded indices {0..signal_extent}.
RecoveryOutcome recover_line(const SpectrogramMeasurement& X, const CyclicSignal& g, long signal_extent,
                             const Tolerances& tol = {});
Decision decide_line(const SpectrogramMeasurement& X, const CyclicSignal& g, long signal_extent,
                     const Tolerances& tol = {});
DifferenceSet line_difference_set(const CyclicSignal& g);
SparseLine to_line(const CyclicSignal& embedded, double rel_tol = 0.0);

struct LineSample {
  Complex z;      // on the unit circle
  Complex value;  // V_ff(k, z) = sum_j f_j conj(f_{j-k}) z^{-j}
};
using LineSamples = std::map<long, std::vector<LineSample>>;

enum class LimitedRegime { Trivial, Shortcut, Induction };
const char* to_string(LimitedRegime r);

struct LineLimitedOutcome {
  std::vector<Complex> estimate;  // indices 0..N
  LimitedRegime regime = LimitedRegime::Trivial;
  double residual = 0;  // max misfit over all samples
  bool consistent = true;
};

// Rows 0 and k > kstar must carry at least N-k+1 distinct samples; rows
// 0 < k <= kstar need only two points with distinct z^{l+1} per step.
LineLimitedOutcome recover_line_limited(const LineSamples& samples, long kstar, long N,
                                        const Tolerances& tol = {});

// Samples a signal on {0..N}: rows 1..kstar at the (kstar+1)-th roots of unity,
// the other rows at the (N+1)-th roots of unity.
LineSamples sample_line_correlations(const std::vector<Complex>& f, long kstar);

}  // namespace stftpr
