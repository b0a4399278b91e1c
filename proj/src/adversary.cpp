#include "stftpr/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace stftpr {

namespace {

const Complex I(0.0, 1.0);

Complex cis(double turns) { return std::polar(1.0, 2.0 * std::numbers::pi * turns); }

double max_abs_entry(const ComplexTable& t) {
  double m = 0;
  for (auto v : t.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

void certify(CounterexampleBundle& b) {
  if (b.signals.size() < 2) throw Error(ErrorCode::InvalidBundle, "bundle needs two signals");
  const auto X0 = measure(b.signals[0], b.window);
  b.max_measurement_gap = 0;
  for (std::size_t i = 1; i < b.signals.size(); ++i)
    b.max_measurement_gap = std::max(b.max_measurement_gap, relative_measurement_gap(X0, measure(b.signals[i], b.window)));
  b.pairwise_phase_err = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.signals.size(); ++i)
    for (std::size_t j = 0; j < b.signals.size(); ++j)
      if (i != j) b.pairwise_phase_err = std::min(b.pairwise_phase_err, compare_up_to_phase(b.signals[i], b.signals[j]).err);
  if (!b.valid()) {
    std::ostringstream os;
    os << b.family << " bundle failed its self-check (gap " << b.max_measurement_gap << ", distance "
       << b.pairwise_phase_err << ")";
    throw Error(ErrorCode::InvalidBundle, os.str());
  }
}

CounterexampleBundle periodic_family(std::size_t d, std::size_t L, std::size_t r) {
  if (r < 2 || d % r || (L + 1) % r || 2 * L >= d)
    throw Error(ErrorCode::InvalidArgument, "periodic family needs r >= 2, r | d, r | L+1, L < d/2");
  CounterexampleBundle b;
  b.family = "periodic";
  b.window = CyclicSignal::zeros(d);
  for (std::size_t j = 0; j <= L; ++j) b.window(j) = 1.0;
  CyclicSignal comb = CyclicSignal::zeros(d);
  for (std::size_t j = 0; j < d; j += r) comb(j) = 1.0;
  for (std::size_t m = 0; m < r; ++m) b.signals.push_back(comb.translated(static_cast<long>(m)));

  // V_gg must vanish wherever V_ff of the comb differs between shifts:
  // the comb's V_ff lives on k in rZ, l in (d/r)Z, and a shift by m multiplies it by e^{-2 pi i m l/d}
  const ComplexTable V = ambiguity(b.window);
  const double scale = max_abs_entry(V);
  double worst = 0;
  for (std::size_t k = 0; k < d; k += r)
    for (std::size_t l = d / r; l < d; l += d / r) worst = std::max(worst, std::abs(V(k, l)));
  if (worst > 1e-12 * scale) throw Error(ErrorCode::InvalidBundle, "box window ambiguity does not vanish on rZ x (d/r)Z");
  b.checks.push_back("V_gg(k, l) = 0 for k in rZ, l in (d/r)Z \\ {0}");
  certify(b);
  return b;
}

CounterexampleBundle delta_pair_cyclic(long k, const CyclicSignal& g) {
  const std::size_t d = g.dim();
  if (wrap(k, d) == 0) throw Error(ErrorCode::InvalidArgument, "k = 0 always lies in the difference set");
  if (difference_set(support_of(g), d).contains(k)) throw Error(ErrorCode::InvalidArgument, "k lies in D_g");
  CounterexampleBundle b;
  b.family = "delta";
  b.window = g;
  CyclicSignal plus = CyclicSignal::delta(d, 0), minus = CyclicSignal::delta(d, 0);
  plus(k) += 1.0;
  minus(k) -= 1.0;
  b.signals = {plus, minus};
  const ComplexTable Vf = ambiguity(plus);
  double worst = 0;
  for (long kk = 0; kk < static_cast<long>(d); ++kk) {
    const std::size_t r = wrap(kk, d);
    if (r == 0 || r == wrap(k, d) || r == wrap(-k, d)) continue;
    for (std::size_t l = 0; l < d; ++l) worst = std::max(worst, std::abs(Vf(kk, l)));
  }
  if (worst > 1e-12) throw Error(ErrorCode::InvalidBundle, "V_ff has mass outside rows 0, +-k");
  b.checks.push_back("V_ff(k', .) = 0 for k' outside {0, k, -k}");
  certify(b);
  return b;
}

CounterexampleBundle delta_pair_line(long k, const SparseLine& g) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k = 0 always lies in the difference set");
  std::vector<long> gs;
  for (const auto& [j, v] : g) gs.push_back(j);
  if (difference_set(gs, std::nullopt).contains(k)) throw Error(ErrorCode::InvalidArgument, "k lies in D_g");
  const long kk = std::abs(k);
  const LineEmbedding e = embed_line(SparseLine{{0, 1.0}, {kk, 1.0}}, g);
  auto b = delta_pair_cyclic(kk, e.g);
  b.family = "delta-line";
  b.checks.push_back("embedded in d = " + std::to_string(e.d) + " without wrap-around");
  return b;
}

CounterexampleBundle real_even_pair(std::size_t d, const std::optional<CyclicSignal>& window, std::uint64_t seed) {
  if (d < 2 || d % 2) throw Error(ErrorCode::InvalidArgument, "real_even_pair needs even d");
  CyclicSignal g;
  if (window) {
    if (window->dim() != d) throw Error(ErrorCode::DimensionMismatch, "window dimension differs from d");
    if (!window->is_real()) throw Error(ErrorCode::NonRealWindow, "window is not real-valued");
    g = *window;
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<Complex> v(d);
    for (auto& x : v) x = n(rng);
    g = CyclicSignal(std::move(v));
  }
  CounterexampleBundle b;
  b.family = "real-even";
  b.window = g;
  CyclicSignal f = CyclicSignal::delta(d, 0), ft = CyclicSignal::delta(d, 0);
  f(static_cast<long>(d / 2)) = Complex(1, 1);
  ft(static_cast<long>(d / 2)) = Complex(1, -1);
  b.signals = {f, ft};
  certify(b);
  return b;
}

CyclicSignal small_d_window(std::size_t d, long k, long l) {
  k = static_cast<long>(wrap(k, d));
  l = static_cast<long>(wrap(l, d));
  if (d == 2) {
    if (k == 0) return CyclicSignal({1.0, 1.0});   // |g0| = |g1|
    if (l == 0) return CyclicSignal({1.0, I});     // Re(g1 conj g0) = 0
    return CyclicSignal({1.0, 2.0});               // Im(g0 conj g1) = 0
  }
  if (k == 0) return CyclicSignal({1.0, 1.0, 1.0});
  if (k == 2) {
    k = 1;
    l = static_cast<long>(wrap(-l, d));
  }
  // V(1,l) = g0 conj(g2) + g1 conj(g0) w + g2 conj(g1) w^2, conjugate-linear in g0
  const Complex w = cis(-static_cast<double>(l) / 3.0);
  const Complex g1 = 1.0, g2 = 2.0;
  const Complex c1 = std::conj(g2), c2 = g1 * w, rhs = -g2 * std::conj(g1) * w * w;
  // solve u c1 + conj(u) c2 = rhs
  const Complex u = (rhs * std::conj(c1) - std::conj(rhs) * c2) / (std::norm(c1) - std::norm(c2));
  return CyclicSignal({u, g1, g2});
}

CounterexampleBundle small_d_witness(std::size_t d, long k, long l) {
  if (d != 2 && d != 3) throw Error(ErrorCode::InvalidArgument, "small_d_witness covers d in {2,3}");
  k = static_cast<long>(wrap(k, d));
  l = static_cast<long>(wrap(l, d));
  if (k == 0 && l == 0) throw Error(ErrorCode::InvalidArgument, "V_gg(0,0) = ||g||^2 cannot vanish");
  CounterexampleBundle b;
  b.family = "small-d";
  b.window = small_d_window(d, k, l);
  if (d == 2) {
    if (k == 0) b.signals = {CyclicSignal({2.0, 1.0}), CyclicSignal({1.0, 2.0})};
    else if (l == 0) b.signals = {CyclicSignal({2.0, 1.0}), CyclicSignal({2.0, -1.0})};
    else b.signals = {CyclicSignal({2.0, I}), CyclicSignal({2.0, -I})};
  } else {
    const double s = 1.0 / std::sqrt(3.0);
    const std::vector<Complex> f{1.0, s * cis(-1.0 / 12.0), s * cis(5.0 / 12.0)};
    const std::vector<Complex> ft{1.0, s * cis(-1.0 / 4.0), s * cis(-5.0 / 12.0)};
    // the base pair agrees off {(1,1),(2,2)}; the chirp f_j -> f_j e^{2 pi i a j^2/3}
    // moves row 1 of V_ff from l to l + 2a and row 2 accordingly
    auto chirp = [&](const std::vector<Complex>& v, long a) {
      std::vector<Complex> out(3);
      for (int j = 0; j < 3; ++j) out[j] = v[j] * cis(static_cast<double>(a * j * j) / 3.0);
      return CyclicSignal(out);
    };
    if (k == 0) {
      // k = 0 rows: any two translates of a delta
      b.signals = {CyclicSignal::delta(3, 0), CyclicSignal::delta(3, 1)};
    } else {
      const long ll = k == 1 ? l : static_cast<long>(wrap(-l, 3));  // orbit representative in row 1
      const long a = static_cast<long>(wrap(ll - 1, 3)) * 2 % 3;     // 2a = ll - 1 mod 3
      b.signals = {chirp(f, a), chirp(ft, a)};
    }
  }
  // equality of V_ff off the punctured orbit, checked directly
  const ComplexTable A = ambiguity(b.signals[0]), B = ambiguity(b.signals[1]);
  double worst = 0;
  for (long kk = 0; kk < static_cast<long>(d); ++kk)
    for (long ll = 0; ll < static_cast<long>(d); ++ll) {
      const bool punct = (kk == k && ll == l) || (wrap(-kk, d) == static_cast<std::size_t>(k) && wrap(-ll, d) == static_cast<std::size_t>(l));
      if (!punct) worst = std::max(worst, std::abs(A(kk, ll) - B(kk, ll)));
    }
  if (worst > 1e-12) throw Error(ErrorCode::InvalidBundle, "witness pair differs off the punctured orbit");
  const ComplexTable Vg = ambiguity(b.window);
  if (std::abs(Vg(k, l)) > 1e-12 * max_abs_entry(Vg)) throw Error(ErrorCode::Internal, "window does not vanish at the puncture");
  b.checks.push_back("V_ff = V_f~f~ off the orbit of (" + std::to_string(k) + "," + std::to_string(l) + ")");
  certify(b);
  return b;
}

}  // namespace stftpr
