#include <algorithm>
#include <cmath>
#include <numeric>

#include "stftpr/recovery.hpp"

namespace stftpr {

const char* to_string(Route r) {
  switch (r) {
    case Route::Full: return "full";
    case Route::GenericShort: return "generic";
    case Route::HoleLong: return "hole(L+1)";
    case Route::HoleShort: return "hole(L)";
    case Route::Center: return "center";
    case Route::DcPair: return "dcpair";
    case Route::None: return "none";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Retrievable: return "Retrievable";
    case Verdict::NotRetrievable: return "NotRetrievable";
    case Verdict::Undecidable: return "Undecidable";
  }
  return "?";
}

namespace {

bool window_in_class(const CanonicalProblem& cp) {
  try {
    window_coeffs(cp.g, cp.L);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool is_center_pattern(const std::vector<Entry>& holes, std::size_t d) {
  const long h = static_cast<long>(d / 2);
  return d % 2 == 0 && d >= 4 && holes.size() == 1 && holes[0] == Entry{h, h};
}

bool is_dc_pattern(const std::vector<Entry>& holes, std::size_t d) {
  if (d < 5 || holes.size() != 2) return false;
  const auto [k0, l0] = holes[0];
  const auto [k1, l1] = holes[1];
  if (k0 != 0 || k1 != 0 || l0 + l1 != static_cast<long>(d) || l0 == l1) return false;
  return std::gcd(l0, static_cast<long>(d)) == 1 || (d == 6 && l0 == 2);
}

// comb witnesses: f = alpha T_m comb_r with r | gcd(d, L+1)
std::optional<std::pair<CyclicSignal, CyclicSignal>> periodic_witness(const SpectrogramMeasurement& X,
                                                                      const CyclicSignal& g, std::size_t L,
                                                                      const Tolerances& tol) {
  const std::size_t d = X.dim();
  const double mass = X.total_mass();
  if (mass <= 0) return std::nullopt;
  const std::size_t G = std::gcd(d, L + 1);
  for (std::size_t r = 2; r <= G; ++r) {
    if (G % r) continue;
    const double alpha = std::sqrt(mass / (static_cast<double>(d) * g.norm2() * static_cast<double>(d / r)));
    for (std::size_t m = 0; m < r; ++m) {
      CyclicSignal f = CyclicSignal::zeros(d);
      for (std::size_t j = m; j < d; j += r) f(j) = alpha;
      const CyclicSignal f1 = f.translated(1);
      if (relative_measurement_gap(measure(f, g), X) < tol.tau_rel &&
          relative_measurement_gap(measure(f1, g), X) < tol.tau_rel)
        return std::make_pair(f, f1);
    }
  }
  return std::nullopt;
}

}  // namespace

RouteChoice select_route(const SpectrogramMeasurement& X, const WindowReport& report, const Tolerances& tol) {
  RouteChoice rc;
  const std::size_t d = X.dim();
  if (report.window.dim() != d) throw Error(ErrorCode::DimensionMismatch, "measurement and window disagree on d");
  if (report.is_full) {
    rc.route = Route::Full;
    return rc;
  }
  if (report.is_generic_short) {
    rc.route = Route::GenericShort;
    return rc;
  }
  if (report.short_L) {
    const CanonicalProblem cp = canonicalize(X, report.window);
    if (window_in_class(cp)) {
      const auto b = measurement_coeffs(cp.X, cp.L);
      const auto longs = long_hole_anchors(b, tol.tau_supp);
      if (!longs.empty()) {
        rc.route = Route::HoleLong;
        rc.anchor = longs.front();
        return rc;
      }
      const auto shorts = hole_classifier(b, cp.L, tol.tau_supp);
      if (!shorts.empty()) {
        rc.route = Route::HoleShort;
        rc.anchor = shorts.front();
        return rc;
      }
      rc.notes.push_back("short window without a detectable hole of length L or L+1");
    } else {
      rc.notes.push_back("short window has interior zeros");
    }
  }
  const auto holes = report.omega.holes();
  if (is_center_pattern(holes, d)) {
    rc.route = Route::Center;
    return rc;
  }
  if (is_dc_pattern(holes, d)) {
    rc.route = Route::DcPair;
    return rc;
  }
  rc.notes.push_back("window class matches no implemented uniqueness theorem");
  return rc;
}

namespace {

RecoveryOutcome run_route(const SpectrogramMeasurement& X, const WindowReport& report, const RouteChoice& rc,
                          const Tolerances& tol) {
  switch (rc.route) {
    case Route::Full: return recover_full(X, report.window, tol);
    case Route::GenericShort: return recover_generic_short(X, report.window, *report.short_L, tol);
    case Route::HoleLong: return recover_with_hole(X, report.window, *report.short_L, *rc.anchor, *report.short_L + 1, tol);
    case Route::HoleShort: return recover_with_hole(X, report.window, *report.short_L, *rc.anchor, *report.short_L, tol);
    case Route::Center: return recover_missing_center(X, report.window, tol);
    case Route::DcPair: return recover_missing_dc_pair(X, report.window, tol);
    case Route::None: break;
  }
  RecoveryOutcome out;
  out.status = RecoveryStatus::Undecidable;
  out.method = "none";
  out.tolerances = tol;
  out.notes = rc.notes;
  return out;
}

}  // namespace

RecoveryOutcome recover_auto(const SpectrogramMeasurement& X, const WindowReport& report, const Tolerances& tol) {
  const RouteChoice rc = select_route(X, report, tol);
  RecoveryOutcome out = run_route(X, report, rc, tol);
  out.notes.insert(out.notes.begin(), "route " + std::string(to_string(rc.route)));
  return out;
}

RecoveryOutcome recover_with_route(const SpectrogramMeasurement& X, const WindowReport& report, Route route,
                                   const Tolerances& tol) {
  RouteChoice rc;
  rc.route = route;
  if (route == Route::HoleLong || route == Route::HoleShort) {
    if (!report.short_L) throw Error(ErrorCode::NotShortWindow, "hole recovery needs a short window");
    const CanonicalProblem cp = canonicalize(X, report.window);
    if (!window_in_class(cp)) throw Error(ErrorCode::PreconditionViolated, "short window has interior zeros");
    const auto b = measurement_coeffs(cp.X, cp.L);
    const auto anchors = route == Route::HoleLong ? long_hole_anchors(b, tol.tau_supp) : hole_classifier(b, cp.L, tol.tau_supp);
    if (anchors.empty()) {
      rc.route = Route::None;
      rc.notes.push_back(route == Route::HoleLong ? "no run of L+1 zeros detected" : "no anchor passes the hole classifier");
    } else {
      rc.anchor = anchors.front();
    }
  } else if (route == Route::GenericShort && !report.short_L) {
    throw Error(ErrorCode::NotShortWindow, "generic recovery needs a short window");
  }
  RecoveryOutcome out = run_route(X, report, rc, tol);
  out.notes.insert(out.notes.begin(), "route " + std::string(to_string(rc.route)));
  return out;
}

Decision decide_retrievability(const SpectrogramMeasurement& X, const WindowReport& report, const Tolerances& tol) {
  Decision dec;
  const RouteChoice rc = select_route(X, report, tol);
  dec.route = rc.route;
  dec.notes = rc.notes;
  if (rc.route == Route::None) {
    if (report.short_L) {
      if (auto w = periodic_witness(X, report.window, *report.short_L, tol)) {
        dec.verdict = Verdict::NotRetrievable;
        dec.witness = std::move(w);
        dec.notes.push_back("periodic comb witness reproduces the measurement");
        return dec;
      }
    }
    dec.verdict = Verdict::Undecidable;
    return dec;
  }
  const RecoveryOutcome out = run_route(X, report, rc, tol);
  dec.partition = out.components;
  if (out.status == RecoveryStatus::Inconsistent) {
    dec.verdict = Verdict::Undecidable;
    dec.notes.push_back("recovery was inconsistent with the measurement");
    return dec;
  }
  if (rc.route == Route::Center || rc.route == Route::DcPair || out.components.connected()) {
    dec.verdict = Verdict::Retrievable;
    return dec;
  }
  // per-component phases are free: flipping one component gives a second signal
  dec.verdict = Verdict::NotRetrievable;
  CyclicSignal twisted = *out.estimate;
  for (long j : out.components.components.back()) twisted(j) = -twisted(j);
  dec.witness = std::make_pair(*out.estimate, twisted);
  return dec;
}

}  // namespace stftpr
