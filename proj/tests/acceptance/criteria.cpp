#include "acceptance/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "oracles/naive.hpp"
#include "stftpr/adversary.hpp"
#include "stftpr/line.hpp"
#include "stftpr/random.hpp"
#include "stftpr/recovery.hpp"

namespace acceptance {

using namespace stftpr;

namespace {

Rng trial_rng(std::uint64_t seed, int criterion, std::uint64_t trial) {
  return Rng::for_trial(seed * 1000003ULL + static_cast<std::uint64_t>(criterion), trial);
}

std::string sci(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << x;
  return os.str();
}

// random cyclic support that is L-connected (nonempty)
std::vector<long> connected_support(std::size_t d, std::size_t L, Rng& rng) {
  for (;;) {
    std::vector<long> s;
    const double p = rng.uniform(0.15, 0.9);
    for (std::size_t j = 0; j < d; ++j)
      if (rng.coin(p)) s.push_back(static_cast<long>(j));
    if (!s.empty() && components_mod_d(s, d, L).connected()) return s;
  }
}

// c clusters separated by at least L zeros, rotated randomly
std::vector<long> clustered_support(std::size_t d, std::size_t L, std::size_t c, Rng& rng) {
  const long free = static_cast<long>(d) - static_cast<long>(c * (L + 1));
  if (free < 0) throw Error(ErrorCode::InvalidArgument, "too many clusters");
  std::vector<long> len(c, 1), gap(c, static_cast<long>(L));
  for (long e = 0; e < free; ++e) {
    if (rng.coin()) ++len[rng.integer(0, static_cast<long>(c) - 1)];
    else ++gap[rng.integer(0, static_cast<long>(c) - 1)];
  }
  std::vector<long> s;
  long pos = rng.integer(0, static_cast<long>(d) - 1);
  for (std::size_t i = 0; i < c; ++i) {
    for (long t = 0; t < len[i]; ++t) s.push_back(static_cast<long>(wrap(pos + t, d)));
    pos += len[i] + gap[i];
  }
  std::sort(s.begin(), s.end());
  return s;
}

std::string join_notes(const RecoveryOutcome& out) {
  std::string s;
  for (const auto& n : out.notes) s += (s.empty() ? "" : "; ") + n;
  return s;
}

struct Tally {
  int trials = 0, failures = 0;
  double worst = 0;
  std::string first_failure;
  void fail(const std::string& why) {
    if (failures++ == 0) first_failure = why;
  }
};

std::string summary(const Tally& t) {
  std::ostringstream os;
  os << t.trials << " trials, " << t.failures << " failures, worst " << sci(t.worst);
  if (t.failures) os << "; first: " << t.first_failure;
  return os.str();
}

}  // namespace

Result ambiguity_relation(std::uint64_t seed) {
  Result r{1, "ambiguity relation (relation_transform . measure = V_ff conj V_gg)", false, {}, 0};
  Tally t;
  for (std::size_t d = 2; d <= 16; ++d)
    for (int i = 0; i < 100; ++i) {
      Rng rng = trial_rng(seed, 1, d * 1000 + i);
      const auto f = random_signal(d, rng), g = random_signal(d, rng);
      const auto R = relation_transform(measure(f, g));
      const auto P = oracle::relation_product(f, g);
      const double rel = oracle::max_abs_diff(R, P) / oracle::max_abs(P);
      t.worst = std::max(t.worst, rel);
      ++t.trials;
      if (!(rel < 1e-9)) t.fail("d=" + std::to_string(d) + " rel " + sci(rel));
    }
  r.passed = t.failures == 0;
  r.detail = summary(t);
  return r;
}

Result orthogonality(std::uint64_t seed) {
  Result r{2, "orthogonality <V_g f, V_g~ f~> = d <f,f~> <g~,g>", false, {}, 0};
  Tally t;
  for (std::size_t d : {3, 8, 16})
    for (int i = 0; i < 100; ++i) {
      Rng rng = trial_rng(seed, 2, d * 1000 + i);
      const auto f = random_signal(d, rng), ft = random_signal(d, rng);
      const auto g = random_signal(d, rng), gt = random_signal(d, rng);
      const auto A = stft(f, g), B = stft(ft, gt);
      Complex lhs = 0;
      for (std::size_t n = 0; n < A.values().size(); ++n) lhs += A.values()[n] * std::conj(B.values()[n]);
      const Complex rhs = static_cast<double>(d) * inner(f, ft) * inner(gt, g);
      const double scale = d * std::sqrt(f.norm2() * ft.norm2() * g.norm2() * gt.norm2());
      const double rel = std::abs(lhs - rhs) / scale;
      t.worst = std::max(t.worst, rel);
      ++t.trials;
      if (!(rel < 1e-9)) t.fail("d=" + std::to_string(d) + " rel " + sci(rel));
    }
  r.passed = t.failures == 0;
  r.detail = summary(t);
  return r;
}

Result generic_recovery(std::uint64_t seed) {
  Result r{3, "generic-window recovery, d=16 L=7", false, {}, 0};
  const std::size_t d = 16, L = 7;
  Tally t;
  int generic = 0;
  const auto band = omega_L_d(d, L);
  for (int i = 0; i < 200; ++i) {
    Rng rng = trial_rng(seed, 3, i);
    const auto g = random_short_window(d, L, rng);
    if (!omega_mask(g).same_support(band)) continue;
    ++generic;
    const auto f = random_on_support(d, connected_support(d, L, rng), rng);
    const auto out = recover_generic_short(measure(f, g), g, L);
    const double err = out.estimate ? compare_up_to_phase(f, *out.estimate).err : 1.0;
    t.worst = std::max(t.worst, err);
    ++t.trials;
    if (out.status != RecoveryStatus::UniqueUpToGlobalPhase || !(err < 1e-7))
      t.fail("trial " + std::to_string(i) + " " + to_string(out.status) + " err " + sci(err));
  }
  r.passed = generic >= 199 && t.failures == 0;
  r.detail = std::to_string(generic) + "/200 generic; " + summary(t);
  return r;
}

Result disconnected_signals(std::uint64_t seed) {
  Result r{4, "disconnected signals: per-component verdict and phase-twisted twins", false, {}, 0};
  Tally t;
  struct Setting {
    std::size_t d, L, comps;
  };
  // with d=16, L=7 two components are antipodal points; three need a shorter window
  const std::vector<Setting> settings{{16, 7, 2}, {16, 3, 2}, {16, 3, 3}};
  int generic = 0, windows = 0;
  for (const auto& s : settings) {
    const auto band = omega_L_d(s.d, s.L);
    for (int i = 0; i < 200; ++i) {
      Rng rng = trial_rng(seed, 4, s.L * 100000 + s.comps * 1000 + i);
      const auto g = random_short_window(s.d, s.L, rng);
      ++windows;
      if (!omega_mask(g).same_support(band)) continue;
      ++generic;
      const auto supp = clustered_support(s.d, s.L, s.comps, rng);
      const auto f = random_on_support(s.d, supp, rng);
      const auto expected = components_mod_d(supp, s.d, s.L);
      const auto X = measure(f, g);
      const auto out = recover_generic_short(X, g, s.L);
      ++t.trials;
      std::ostringstream tag;
      tag << "d=" << s.d << " L=" << s.L << " c=" << s.comps << " trial " << i;
      if (expected.count() != s.comps) t.fail(tag.str() + " generator produced " + std::to_string(expected.count()));
      if (out.status != RecoveryStatus::UniquePerComponent || out.free_phases != expected.count() ||
          out.components.components != expected.components) {
        t.fail(tag.str() + " solver " + to_string(out.status) + " free " + std::to_string(out.free_phases));
        continue;
      }
      // each recovered component matches f up to its own phase
      for (const auto& comp : expected.components) {
        CyclicSignal a = CyclicSignal::zeros(s.d), b = CyclicSignal::zeros(s.d);
        for (long j : comp) a(j) = f(j), b(j) = (*out.estimate)(j);
        const double err = compare_up_to_phase(a, b).err;
        t.worst = std::max(t.worst, err);
        if (!(err < 1e-7)) t.fail(tag.str() + " component err " + sci(err));
      }
      // twins: random phase per component leave the measurement unchanged
      CyclicSignal twin = f;
      for (const auto& comp : expected.components) {
        const Complex ph = rng.unit();
        for (long j : comp) twin(j) *= ph;
      }
      const double gap = relative_measurement_gap(measure(twin, g), X);
      t.worst = std::max(t.worst, gap);
      if (!(gap < 1e-9)) t.fail(tag.str() + " twin gap " + sci(gap));
    }
  }
  r.passed = t.failures == 0 && generic >= windows - 3;
  r.detail = std::to_string(generic) + "/" + std::to_string(windows) + " generic; " + summary(t);
  return r;
}

Result punctured_center(std::uint64_t seed) {
  Result r{5, "punctured-center window: one hole at (d/2,d/2), exact recovery", false, {}, 0};
  Tally t;
  for (std::size_t d = 4; d <= 20; d += 2) {
    const auto g = construct_punctured_center_window(d);
    const long h = static_cast<long>(d / 2);
    const auto holes = omega_mask_certified(g).holes();
    if (holes != std::vector<Entry>{{h, h}}) t.fail("d=" + std::to_string(d) + " has " + std::to_string(holes.size()) + " holes");
    for (int i = 0; i < 50; ++i) {
      Rng rng = trial_rng(seed, 5, d * 1000 + i);
      std::vector<long> supp;
      if (i % 5 == 0) {
        const long j = rng.integer(0, h - 1);
        supp = {j, j + h};
      } else if (i % 5 == 1) {
        supp = {rng.integer(0, static_cast<long>(d) - 1)};
      } else {
        const double p = rng.uniform(0.2, 1.0);
        for (std::size_t j = 0; j < d; ++j)
          if (rng.coin(p)) supp.push_back(static_cast<long>(j));
        if (supp.empty()) supp.push_back(0);
      }
      const auto f = random_on_support(d, supp, rng);
      const auto out = recover_missing_center(measure(f, g), g);
      const double err = out.estimate ? compare_up_to_phase(f, *out.estimate).err : 1.0;
      t.worst = std::max(t.worst, err);
      ++t.trials;
      if (out.status != RecoveryStatus::UniqueUpToGlobalPhase || !(err < 1e-7))
        t.fail("d=" + std::to_string(d) + " trial " + std::to_string(i) + " " + to_string(out.status) + " err " + sci(err));
    }
  }
  r.passed = t.failures == 0;
  r.detail = summary(t);
  return r;
}

Result punctured_dc(std::uint64_t seed) {
  Result r{6, "punctured-DC window: holes (0,+-l*), exact recovery", false, {}, 0};
  Tally t;
  for (std::size_t d = 5; d <= 20; ++d) {
    const long ls = lstar(static_cast<long>(d));
    const long D = static_cast<long>(d);
    if (!(4 * ls > D && 4 * ls < 3 * D) || (d != 6 && std::gcd(ls, D) != 1))
      t.fail("lstar(" + std::to_string(d) + ") = " + std::to_string(ls));
    const auto g = construct_punctured_dc_window(d, seed + d);
    const auto holes = omega_mask_certified(g).holes();
    if (holes != std::vector<Entry>{{0, ls}, {0, D - ls}}) t.fail("d=" + std::to_string(d) + " hole pattern");
    for (int i = 0; i < 50; ++i) {
      Rng rng = trial_rng(seed, 6, d * 1000 + i);
      std::vector<long> supp;
      if (i % 6 == 0) {
        supp = {rng.integer(0, D - 1)};
      } else if (i % 6 == 1) {
        const long a = rng.integer(0, D - 1);
        supp = {a, static_cast<long>(wrap(a + rng.integer(1, D - 1), d))};
        std::sort(supp.begin(), supp.end());
      } else {
        const double p = rng.uniform(0.2, 1.0);
        for (std::size_t j = 0; j < d; ++j)
          if (rng.coin(p)) supp.push_back(static_cast<long>(j));
        if (supp.empty()) supp.push_back(1);
      }
      const auto f = random_on_support(d, supp, rng);
      const auto out = recover_missing_dc_pair(measure(f, g), g);
      const double err = out.estimate ? compare_up_to_phase(f, *out.estimate).err : 1.0;
      t.worst = std::max(t.worst, err);
      ++t.trials;
      if (out.status != RecoveryStatus::UniqueUpToGlobalPhase || !(err < 1e-7))
        t.fail("d=" + std::to_string(d) + " trial " + std::to_string(i) + " |supp|=" + std::to_string(supp.size()) +
               " " + to_string(out.status) + " err " + sci(err));
    }
  }
  r.passed = t.failures == 0;
  r.detail = summary(t);
  return r;
}

Result hole_recovery(std::uint64_t seed) {
  Result r{7, "hole-based recovery on non-generic windows, d=12 L=4", false, {}, 0};
  const std::size_t d = 12, L = 4;
  const long D = 12, LL = 4;
  const auto band = omega_L_d(d, L);
  Tally t;
  int nongeneric = 0, classified = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng = trial_rng(seed, 7, i);
    const long k = rng.integer(1, LL - 1), l = rng.integer(0, D - 1);
    const auto g = construct_vanishing_window(d, random_vector(L, rng), k, l).translated(rng.integer(0, D - 1));
    if (!omega_mask(g).same_support(band)) ++nongeneric;
    std::ostringstream tag;
    tag << "trial " << i << " zero at (" << k << "," << l << ")";

    // (L+1)-hole: zeros on js..js+L, everything else nonzero
    {
      const long js = rng.integer(0, D - 1);
      std::vector<long> supp;
      for (long j = js + LL + 1; j < js + D; ++j) supp.push_back(static_cast<long>(wrap(j, d)));
      const auto f = random_on_support(d, supp, rng);
      const auto X = measure(f, g);
      const auto out = recover_with_hole(X, g, L, js, L + 1);
      const double err = out.estimate ? compare_up_to_phase(f, *out.estimate).err : 1.0;
      t.worst = std::max(t.worst, err);
      ++t.trials;
      if (out.status != RecoveryStatus::UniqueUpToGlobalPhase || !(err < 1e-7))
        t.fail(tag.str() + " L+1 hole " + to_string(out.status) + " err " + sci(err) + " [" + join_notes(out) + "]");
    }
    // exactly an L-hole after js, with mass right before js
    {
      const long js = rng.integer(0, D - 1);
      std::vector<long> supp{js};
      for (long j = js + LL + 1; j < js + D; ++j) supp.push_back(static_cast<long>(wrap(j, d)));
      const auto f = random_on_support(d, supp, rng);
      const auto X = measure(f, g);
      const auto cp = canonicalize(X, g);
      const auto anchors = hole_classifier(measurement_coeffs(cp.X, L), L);
      if (std::find(anchors.begin(), anchors.end(), js) == anchors.end()) {
        t.fail(tag.str() + " classifier missed j*=" + std::to_string(js));
        continue;
      }
      ++classified;
      const auto out = recover_with_hole(X, g, L, js, L);
      const double err = out.estimate ? compare_up_to_phase(f, *out.estimate).err : 1.0;
      t.worst = std::max(t.worst, err);
      ++t.trials;
      if (out.status != RecoveryStatus::UniqueUpToGlobalPhase || !(err < 1e-7))
        t.fail(tag.str() + " L hole " + to_string(out.status) + " err " + sci(err) + " [" + join_notes(out) + "]");
    }
  }
  r.passed = t.failures == 0 && nongeneric == 100;
  r.detail = std::to_string(nongeneric) + "/100 non-generic, " + std::to_string(classified) + "/100 anchors found; " + summary(t);
  return r;
}

Result counterexamples(std::uint64_t seed) {
  Result r{8, "counterexample bundles self-check", false, {}, 0};
  int ok = 0, total = 0;
  std::string failures;
  auto run = [&](const std::string& name, const std::function<CounterexampleBundle()>& make) {
    ++total;
    try {
      const auto b = make();
      if (b.valid()) ++ok;
      else failures += name + " invalid; ";
    } catch (const std::exception& e) {
      failures += name + ": " + e.what() + "; ";
    }
  };
  run("periodic(8,3,2)", [] { return periodic_family(8, 3, 2); });
  for (std::size_t d : {4, 6, 8})
    run("real-even d=" + std::to_string(d), [&] { return real_even_pair(d, std::nullopt, seed + d); });
  for (std::size_t d : {2, 3})
    for (long k = 0; k < static_cast<long>(d); ++k)
      for (long l = 0; l < static_cast<long>(d); ++l)
        if (k || l)
          run("small-d d=" + std::to_string(d) + " (" + std::to_string(k) + "," + std::to_string(l) + ")",
              [&] { return small_d_witness(d, k, l); });
  // truncated difference-sequence window with one term dropped
  for (std::size_t drop = 1; drop < 5; ++drop) {
    run("delta-line drop " + std::to_string(drop), [&] {
      std::vector<Complex> coeffs{1.0, Complex(0.5, 1.0), -2.0, Complex(0, 1.5), 0.75};
      const auto pos = difference_sequence(coeffs.size());
      SparseLine g = construct_line_difference_window(coeffs);
      g.erase(pos[drop]);
      return delta_pair_line(pos[drop] - pos[0], g);
    });
  }
  run("delta cyclic d=8", [] {
    CyclicSignal g = CyclicSignal::zeros(8);
    g(0) = 1.0;
    g(1) = Complex(0.3, -0.7);
    return delta_pair_cyclic(4, g);
  });
  r.passed = ok == total;
  r.detail = std::to_string(ok) + "/" + std::to_string(total) + " bundles valid" + (failures.empty() ? "" : "; " + failures);
  return r;
}

Result line_mode(std::uint64_t seed) {
  Result r{9, "line mode: block-window dichotomy and limited-sample recovery", false, {}, 0};
  Tally t;
  int connected = 0, split = 0;
  for (long L : {2L, 4L})
    for (int i = 0; i < 60; ++i) {
      Rng rng = trial_rng(seed, 9, L * 1000 + i);
      const long ext = rng.integer(0, 12);
      SparseLine f, g;
      const double p = rng.uniform(0.2, 0.8);
      f[0] = rng.gaussian();
      f[ext] = rng.gaussian();
      for (long j = 1; j < ext; ++j)
        if (rng.coin(p)) f[j] = rng.gaussian();
      for (long j = 0; j <= L; ++j) g[j] = rng.gaussian();
      const auto e = embed_line(f, g);
      std::vector<long> supp;
      for (const auto& [j, v] : f) supp.push_back(j);
      const auto expected = components_line(supp, L);
      const auto out = recover_line(measure(e.f, e.g), e.g, e.f_extent);
      ++t.trials;
      std::ostringstream tag;
      tag << "L=" << L << " trial " << i;
      if (expected.connected()) {
        ++connected;
        const double err = out.estimate ? compare_up_to_phase(e.f, *out.estimate).err : 1.0;
        t.worst = std::max(t.worst, err);
        if (out.status != RecoveryStatus::UniqueUpToGlobalPhase || !(err < 1e-7))
          t.fail(tag.str() + " " + to_string(out.status) + " err " + sci(err));
      } else {
        ++split;
        if (out.status != RecoveryStatus::UniquePerComponent || out.free_phases != expected.count())
          t.fail(tag.str() + " expected " + std::to_string(expected.count()) + " components, got " +
                 to_string(out.status) + "/" + std::to_string(out.free_phases));
      }
    }
  int shortcut = 0, induction = 0;
  for (int i = 0; i < 50; ++i) {
    Rng rng = trial_rng(seed, 9, 900000 + i);
    const long N = rng.integer(0, 10);
    std::vector<Complex> f(N + 1, Complex(0));
    const long j0 = rng.integer(0, N), J = rng.integer(j0, N);
    for (long j = j0; j <= J; ++j)
      if (j == j0 || j == J || rng.coin(0.7)) f[j] = rng.gaussian();
    const auto out = recover_line_limited(sample_line_correlations(f, 2), 2, N);
    if (out.regime == LimitedRegime::Shortcut) ++shortcut;
    if (out.regime == LimitedRegime::Induction) ++induction;
    const double err = compare_up_to_phase(CyclicSignal(f.size() < 2 ? std::vector<Complex>{f[0], 0.0} : f),
                                           CyclicSignal(out.estimate.size() < 2 ? std::vector<Complex>{out.estimate[0], 0.0} : out.estimate)).err;
    t.worst = std::max(t.worst, err);
    ++t.trials;
    if (!(err < 1e-7) || !out.consistent) t.fail("limited trial " + std::to_string(i) + " err " + sci(err));
  }
  r.passed = t.failures == 0 && connected > 0 && split > 0;
  r.detail = std::to_string(connected) + " connected / " + std::to_string(split) + " split; limited: " +
             std::to_string(shortcut) + " shortcut, " + std::to_string(induction) + " induction; " + summary(t);
  return r;
}

Result oracle_equivalence(std::uint64_t seed) {
  Result r{10, "fast transforms match naive oracles, d <= 32", false, {}, 0};
  Tally t;
  auto rel_vec = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double diff = 0, scale = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      diff = std::max(diff, std::abs(a[i] - b[i]));
      scale = std::max(scale, std::abs(b[i]));
    }
    return diff / scale;
  };
  auto rel_tab = [](const ComplexTable& a, const ComplexTable& b) { return oracle::max_abs_diff(a, b) / oracle::max_abs(b); };
  for (std::size_t d = 2; d <= 32; ++d)
    for (int i = 0; i < 50; ++i) {
      Rng rng = trial_rng(seed, 10, d * 1000 + i);
      const auto v = random_vector(d, rng);
      const auto f = random_signal(d, rng), g = random_signal(d, rng);
      const auto X = measure(f, g);
      const double errs[] = {
          rel_vec(dft(v), oracle::dft(v)),
          rel_vec(inverse_dft(v), oracle::inverse_dft(v)),
          rel_tab(stft(f, g), oracle::stft(f, g)),
          rel_tab(ambiguity(g), oracle::stft(g, g)),
          rel_tab(relation_transform(X), oracle::relation_transform(X)),
      };
      const char* names[] = {"dft", "inverse_dft", "stft", "ambiguity", "relation_transform"};
      ++t.trials;
      for (int n = 0; n < 5; ++n) {
        t.worst = std::max(t.worst, errs[n]);
        if (!(errs[n] < 1e-12)) t.fail(std::string(names[n]) + " d=" + std::to_string(d) + " rel " + sci(errs[n]));
      }
      const auto Xo = oracle::measure(f, g);
      double mdiff = 0;
      for (std::size_t n = 0; n < X.values().size(); ++n) mdiff = std::max(mdiff, std::abs(X.values()[n] - Xo.values()[n]));
      const double mrel = mdiff / Xo.max_value();
      t.worst = std::max(t.worst, mrel);
      if (!(mrel < 1e-12)) t.fail("measure d=" + std::to_string(d) + " rel " + sci(mrel));
    }
  r.passed = t.failures == 0;
  r.detail = summary(t);
  return r;
}

std::vector<Result> run_all(std::uint64_t seed, std::ostream& os) {
  const std::vector<std::function<Result(std::uint64_t)>> all{
      ambiguity_relation, orthogonality, generic_recovery, disconnected_signals, punctured_center,
      punctured_dc,       hole_recovery, counterexamples,  line_mode,            oracle_equivalence};
  std::vector<Result> results;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Result res;
    try {
      res = c(seed);
    } catch (const std::exception& e) {
      res.id = static_cast<int>(results.size()) + 1;
      res.name = "criterion " + std::to_string(res.id);
      res.passed = false;
      res.detail = std::string("threw: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    os << (res.passed ? "PASS" : "FAIL") << "  [" << std::setw(2) << res.id << "] " << res.name << " ("
       << std::fixed << std::setprecision(1) << res.seconds << "s)\n        " << res.detail << "\n";
    os.flush();
    results.push_back(res);
  }
  return results;
}

}  // namespace acceptance
