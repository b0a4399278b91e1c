#include "stftpr/window.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace stftpr {

const char* to_string(ThresholdRule r) {
  return r == ThresholdRule::RelativeToMax ? "relative-to-max" : "roundoff";
}

bool OmegaMask::row_full(long k) const {
  const std::size_t r = wrap(k, d);
  return std::all_of(mask.begin() + r * d, mask.begin() + (r + 1) * d, [](auto b) { return b != 0; });
}

bool OmegaMask::all_true() const {
  return std::all_of(mask.begin(), mask.end(), [](auto b) { return b != 0; });
}

std::vector<Entry> OmegaMask::holes() const {
  std::vector<Entry> out;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      if (!mask[k * d + l]) out.emplace_back(k, l);
  return out;
}

OmegaMask omega_mask(const CyclicSignal& g, double tau_rel) {
  if (!(tau_rel > 0 && tau_rel < 1)) throw Error(ErrorCode::InvalidArgument, "tau_rel must lie in (0,1)");
  ComplexTable V = ambiguity(g);
  const std::size_t d = g.dim();
  double mx = 0;
  for (auto v : V.values()) mx = std::max(mx, std::abs(v));
  if (mx == 0) throw Error(ErrorCode::ZeroWindow, "window is identically zero");
  OmegaMask m{d, std::vector<std::uint8_t>(d * d), ThresholdRule::RelativeToMax, tau_rel, tau_rel * mx};
  for (std::size_t i = 0; i < d * d; ++i) m.mask[i] = std::abs(V.values()[i]) > m.cutoff;
  // magnitudes at (k,l) and (-k,-l) agree exactly in theory; make the mask agree too
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) {
      const std::size_t a = k * d + l, b = wrap(-static_cast<long>(k), d) * d + wrap(-static_cast<long>(l), d);
      const std::uint8_t both = m.mask[a] && m.mask[b];
      m.mask[a] = m.mask[b] = both;
    }
  return m;
}

OmegaMask omega_mask_certified(const CyclicSignal& g, double kappa) {
  if (!(kappa > 0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
  const std::size_t d = g.dim();
  const double gmax = g.max_abs();
  if (gmax == 0) throw Error(ErrorCode::ZeroWindow, "window is identically zero");
  using LC = std::complex<long double>;
  std::vector<LC> h(d);
  for (std::size_t j = 0; j < d; ++j) h[j] = LC(g.entries()[j]) / static_cast<long double>(gmax);
  std::vector<LC> roots(d);
  for (std::size_t m = 0; m < d; ++m) {
    long double ang = -2.0L * std::numbers::pi_v<long double> * m / d;
    roots[m] = LC(std::cos(ang), std::sin(ang));
  }
  const long double rel = kappa * DBL_EPSILON + static_cast<long double>(d) * LDBL_EPSILON;
  OmegaMask m{d, std::vector<std::uint8_t>(d * d), ThresholdRule::Roundoff, kappa, 0};
  std::vector<LC> prod(d);
  for (std::size_t k = 0; k < d; ++k) {
    long double scale = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const LC other = h[wrap(static_cast<long>(j) - static_cast<long>(k), d)];
      prod[j] = h[j] * std::conj(other);
      scale += std::abs(h[j]) * std::abs(other);
    }
    const long double cut = rel * scale;
    m.cutoff = std::max(m.cutoff, static_cast<double>(cut * gmax * gmax));
    for (std::size_t l = 0; l < d; ++l) {
      LC s = 0;
      for (std::size_t j = 0; j < d; ++j) s += prod[j] * roots[(j * l) % d];
      m.mask[k * d + l] = std::abs(s) > cut;
    }
  }
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) {
      const std::size_t a = k * d + l, b = wrap(-static_cast<long>(k), d) * d + wrap(-static_cast<long>(l), d);
      const std::uint8_t both = m.mask[a] && m.mask[b];
      m.mask[a] = m.mask[b] = both;
    }
  return m;
}

OmegaMask omega_mask(const CyclicSignal& g, const MaskOptions& opts) {
  return opts.rule == ThresholdRule::RelativeToMax ? omega_mask(g, opts.tau_rel)
                                                   : omega_mask_certified(g, opts.kappa);
}

OmegaMask omega_L_d(std::size_t d, std::size_t L) {
  if (2 * L >= d) throw Error(ErrorCode::InvalidArgument, "omega_L_d needs L < d/2");
  OmegaMask m{d, std::vector<std::uint8_t>(d * d), ThresholdRule::RelativeToMax, 0, 0};
  for (std::size_t k = 0; k < d; ++k) {
    const bool on = k <= L || k >= d - L;
    std::fill(m.mask.begin() + k * d, m.mask.begin() + (k + 1) * d, on);
  }
  return m;
}

bool DifferenceSet::contains(long k) const {
  return members.count(modulus ? static_cast<long>(wrap(k, *modulus)) : k) != 0;
}

bool DifferenceSet::covers_all_residues() const {
  return modulus && members.size() == *modulus;
}

DifferenceSet difference_set(const std::vector<long>& support, std::optional<std::size_t> d) {
  if (support.empty()) throw Error(ErrorCode::EmptySupport, "difference set of empty support");
  DifferenceSet out{d, {}};
  for (long a : support)
    for (long b : support) out.members.insert(d ? static_cast<long>(wrap(a - b, *d)) : a - b);
  return out;
}

std::vector<long> support_of(const CyclicSignal& s, double rel_tol) {
  const double cut = rel_tol * s.max_abs();
  std::vector<long> out;
  for (std::size_t j = 0; j < s.dim(); ++j)
    if (std::abs(s.entries()[j]) > cut) out.push_back(static_cast<long>(j));
  return out;
}

CanonicalShift canonical_shift(const std::vector<long>& support, std::size_t d) {
  if (support.empty()) throw Error(ErrorCode::EmptySupport, "canonical shift of empty support");
  std::vector<long> s;
  for (long x : support) s.push_back(static_cast<long>(wrap(x, d)));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  const std::size_t n = s.size();
  long best_gap = -1, best_start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long next = i + 1 < n ? s[i + 1] : s[0] + static_cast<long>(d);
    const long gap = next - s[i];
    const long start = s[(i + 1) % n];
    if (gap > best_gap || (gap == best_gap && start < best_start)) {
      best_gap = gap;
      best_start = start;
    }
  }
  return {best_start, static_cast<std::size_t>(static_cast<long>(d) - best_gap)};
}

CyclicSignal construct_power_window(std::size_t d, std::size_t L) {
  if (2 * L >= d) throw Error(ErrorCode::InvalidArgument, "power window needs L < d/2");
  CyclicSignal g = CyclicSignal::zeros(d);
  for (std::size_t j = 0; j <= L; ++j) g(j) = std::ldexp(1.0, static_cast<int>(j));
  return g;
}

CyclicSignal construct_punctured_center_window(std::size_t d) {
  if (d < 4 || d % 2) throw Error(ErrorCode::InvalidArgument, "punctured-center window needs even d >= 4");
  const std::size_t m = d / 2;
  std::vector<Complex> g(d);
  for (std::size_t j = 0; j < m; ++j) g[j] = std::ldexp(1.0, static_cast<int>(j));
  if (d % 4 == 0) {
    for (std::size_t j = m; j < d; ++j) {
      const double s = std::ldexp(1.0, -static_cast<int>(j - m));
      const double big = std::ldexp(1.0, static_cast<int>(4 * j - d));
      g[j] = j <= m + 1 ? s * Complex(1.0, std::sqrt(big - 1.0)) : s * Complex(2.0, std::sqrt(big - 4.0));
    }
  } else {
    // g_i conj(g_{i+m}) = x_i + i y_i with y = (1,1,0,...): the odd-l sum is 2i(1 + w),
    // zero only at l = m, and the even-l sum is dominated by its last term.
    for (std::size_t i = 0; i < m; ++i) {
      const double y = i < 2 ? 1.0 : 0.0;
      const double x = std::sqrt(std::ldexp(1.0, static_cast<int>(4 * i + d)) - y * y);
      g[i + m] = std::conj(Complex(x, y)) * std::ldexp(1.0, -static_cast<int>(i));
    }
  }
  return CyclicSignal(std::move(g));
}

long lstar(long d) {
  if (d < 5) throw Error(ErrorCode::InvalidArgument, "lstar needs d >= 5");
  if (d == 6) return 2;
  if (d % 2) return (d - 1) / 2;
  if (d % 4 == 0) return d / 2 - 1;
  return d / 2 - 2;
}

std::vector<double> punctured_dc_polynomial(std::size_t d) {
  const long ls = lstar(static_cast<long>(d));
  const std::size_t m = d / 2;
  const double c = std::cos(2.0 * std::numbers::pi * ls / static_cast<double>(d));
  std::vector<double> p{1.0, -2.0 * c, 1.0};
  for (std::size_t t = 2; t < m; ++t) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i] += 2.0 * p[i];
      q[i + 1] += p[i];
    }
    p = std::move(q);
  }
  for (double a : p)
    if (!(a > 0)) throw Error(ErrorCode::Internal, "punctured-DC polynomial has a nonpositive coefficient");
  return p;
}

CyclicSignal construct_punctured_dc_window(std::size_t d, std::uint64_t seed) {
  if (d < 5) throw Error(ErrorCode::InvalidArgument, "punctured-DC window needs d >= 5");
  const std::vector<double> a = punctured_dc_polynomial(d);
  const std::size_t m = d / 2;
  const long ls = lstar(static_cast<long>(d));
  std::vector<Complex> g(d);
  for (std::size_t j = 0; j < m; ++j) g[j] = std::sqrt(a[j]);
  const double cm = std::sqrt(a[m]);

  // every g_m that zeroes some V_gg(k,l) with 0 < k < d/2
  std::vector<Complex> bad{cm, -cm, Complex(0, cm), Complex(0, -cm)};
  for (std::size_t k = 1; 2 * k < d; ++k) {
    if (k > m) break;
    for (std::size_t l = 0; l < d; ++l) {
      const double th = -2.0 * std::numbers::pi / static_cast<double>(d) * static_cast<double>(l);
      Complex s = 0;
      for (std::size_t j = k; j < m; ++j) s += g[j] * std::conj(g[j - k]) * std::polar(1.0, th * j);
      bad.push_back(-s / (std::conj(g[m - k]) * std::polar(1.0, th * m)));
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const std::vector<Entry> expected{{0, ls}, {0, static_cast<long>(d) - ls}};
  for (int draw = 0; draw < 1000; ++draw) {
    const Complex gm = std::polar(cm, angle(rng));
    const bool near_bad = std::any_of(bad.begin(), bad.end(),
                                      [&](Complex b) { return std::abs(gm - b) < 1e-3 * cm; });
    if (near_bad) continue;
    g[m] = gm;
    CyclicSignal w(g);
    if (omega_mask_certified(w).holes() == expected) return w;
  }
  throw Error(ErrorCode::RejectionExhausted, "no admissible g_m after 1000 draws");
}

CyclicSignal construct_vanishing_window(std::size_t d, const std::vector<Complex>& tail, long k, long l) {
  const std::size_t L = tail.size();
  if (L == 0 || 2 * L >= d) throw Error(ErrorCode::InvalidArgument, "vanishing window needs 1 <= L < d/2");
  if (2 * wrap(k, d) > d) {
    k = -k;
    l = -l;
  }
  k = static_cast<long>(wrap(k, d));
  if (k < 1 || k >= static_cast<long>(L))
    throw Error(ErrorCode::InvalidArgument, "vanishing window needs 1 <= |k| <= L-1");
  std::vector<Complex> g(d);
  for (std::size_t j = 1; j <= L; ++j) g[j] = tail[j - 1];
  const double th = -2.0 * std::numbers::pi * static_cast<double>(wrap(l, d)) / static_cast<double>(d);
  Complex s = 0;
  for (std::size_t j = k + 1; j <= L; ++j) s += g[j] * std::conj(g[j - k]) * std::polar(1.0, th * j);
  g[0] = std::conj(-s / (g[k] * std::polar(1.0, th * k)));
  return CyclicSignal(std::move(g));
}

std::vector<long> difference_sequence(std::size_t n_terms) {
  std::vector<long> a{0};
  while (a.size() < n_terms) {
    std::set<long> diffs;
    for (long x : a)
      for (long y : a) diffs.insert(x - y);
    long b = 0;
    while (diffs.count(b)) ++b;
    const long base = a.back();  // a_{2n}
    a.push_back(2 * base + 2 * b);
    a.push_back(2 * base + 3 * b);
  }
  a.resize(n_terms);
  return a;
}

SparseLine construct_line_difference_window(const std::vector<Complex>& coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one term");
  for (auto c : coeffs)
    if (c == Complex(0)) throw Error(ErrorCode::InvalidArgument, "zero coefficient");
  const std::vector<long> pos = difference_sequence(coeffs.size());
  SparseLine g;
  for (std::size_t n = 0; n < pos.size(); ++n) g[pos[n]] = coeffs[n];
  return g;
}

RealWindowVerdict real_window_feasibility(std::size_t d) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "d must be at least 2");
  RealWindowVerdict v;
  if (d % 2 == 0) {
    for (std::size_t l = 1; l < d; l += 2) v.forced_zeros.emplace_back(static_cast<long>(d / 2), static_cast<long>(l));
    return v;
  }
  v.feasible = true;
  v.witness = construct_power_window(d, (d - 1) / 2);
  return v;
}

WindowReport analyze_window(const CyclicSignal& g, const MaskOptions& opts) {
  WindowReport r;
  r.window = g;
  r.support = support_of(g);
  if (r.support.empty()) throw Error(ErrorCode::ZeroWindow, "window is identically zero");
  const std::size_t d = g.dim();
  const CanonicalShift cs = canonical_shift(r.support, d);
  r.shift = cs.shift;
  if (2 * cs.length < d) r.short_L = cs.length;
  r.omega = omega_mask(g, opts);
  r.dg = difference_set(r.support, d);
  r.is_full = r.omega.all_true();
  r.is_generic_short = r.short_L && r.omega.same_support(omega_L_d(d, *r.short_L));
  r.real_valued = g.is_real();
  return r;
}

}  // namespace stftpr
