#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stftpr/signal.hpp"
#include "stftpr/spectral.hpp"

namespace stftpr {

enum class ThresholdRule {
  RelativeToMax,  // |V| > tau * max |V|
  Roundoff,       // |V| > (kappa eps + d eps_ld) * sum_j |g_j||g_{j-k}|, evaluated in long double
};

const char* to_string(ThresholdRule r);

struct MaskOptions {
  ThresholdRule rule = ThresholdRule::RelativeToMax;
  double tau_rel = 1e-9;
  double kappa = 4.0;
};

using Entry = std::pair<long, long>;

struct OmegaMask {
  std::size_t d = 0;
  std::vector<std::uint8_t> mask;  // row-major, k major
  ThresholdRule rule = ThresholdRule::RelativeToMax;
  double parameter = 0;  // tau_rel or kappa
  double cutoff = 0;     // absolute cutoff (largest one for the row-scaled rule)

  bool operator()(long k, long l) const { return mask[wrap(k, d) * d + wrap(l, d)] != 0; }
  bool row_full(long k) const;
  bool all_true() const;
  std::vector<Entry> holes() const;  // false entries, (k, l) ascending
  bool same_support(const OmegaMask& o) const { return d == o.d && mask == o.mask; }
};

OmegaMask omega_mask(const CyclicSignal& g, double tau_rel = 1e-9);
OmegaMask omega_mask_certified(const CyclicSignal& g, double kappa = 4.0);
OmegaMask omega_mask(const CyclicSignal& g, const MaskOptions& opts);
OmegaMask omega_L_d(std::size_t d, std::size_t L);

struct DifferenceSet {
  std::optional<std::size_t> modulus;  // empty on the integer line
  std::set<long> members;
  bool contains(long k) const;
  bool covers_all_residues() const;
};

DifferenceSet difference_set(const std::vector<long>& support, std::optional<std::size_t> d);

std::vector<long> support_of(const CyclicSignal& s, double rel_tol = 0.0);

// minimal cyclic arc holding the support: start index and length L (arc = start..start+L)
struct CanonicalShift {
  long shift = 0;
  std::size_t length = 0;
};
CanonicalShift canonical_shift(const std::vector<long>& support, std::size_t d);

CyclicSignal construct_power_window(std::size_t d, std::size_t L);
CyclicSignal construct_punctured_center_window(std::size_t d);
long lstar(long d);
std::vector<double> punctured_dc_polynomial(std::size_t d);  // coefficients a_0..a_m of p
CyclicSignal construct_punctured_dc_window(std::size_t d, std::uint64_t seed);

// Choose g_0 so that V_gg(k,l) = 0 for a window supported on {0..L}; tail = (g_1..g_L).
CyclicSignal construct_vanishing_window(std::size_t d, const std::vector<Complex>& tail, long k, long l);

std::vector<long> difference_sequence(std::size_t n_terms);
SparseLine construct_line_difference_window(const std::vector<Complex>& coeffs);

struct RealWindowVerdict {
  bool feasible = false;
  std::vector<Entry> forced_zeros;  // for even d
  std::optional<CyclicSignal> witness;
};
RealWindowVerdict real_window_feasibility(std::size_t d);

struct WindowReport {
  CyclicSignal window;
  std::vector<long> support;
  long shift = 0;
  std::optional<std::size_t> short_L;
  OmegaMask omega;
  DifferenceSet dg;
  bool is_generic_short = false;
  bool is_full = false;
  bool real_valued = false;
};

WindowReport analyze_window(const CyclicSignal& g, const MaskOptions& opts = {});

}  // namespace stftpr
