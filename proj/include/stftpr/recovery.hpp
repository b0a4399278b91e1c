#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stftpr/connectivity.hpp"
#include "stftpr/spectral.hpp"
#include "stftpr/window.hpp"

namespace stftpr {

struct Tolerances {
  double tau_rel = 1e-9;       // window zero detection
  double tau_supp = 1e-10;     // signal support / hole detection, relative
  double phase_tol = 1e-6;     // radians, cycle consistency
  double residual_tol = 1e-6;  // relative residual before declaring Inconsistent
};

// a[k][j] = f_j conj(f_{j-k}) for the shifts that are known
struct CorrelationData {
  std::size_t d = 0;
  std::map<long, std::vector<Complex>> a;  // keys in [0, d)

  bool known(long k) const { return a.count(static_cast<long>(wrap(k, d))) != 0; }
  const std::vector<Complex>& at(long k) const { return a.at(static_cast<long>(wrap(k, d))); }
  std::vector<long> known_shifts() const;
};

// c[k][m - k] = g_m conj(g_{m-k}), m in {k..L}
struct WindowCoefficients {
  std::size_t L = 0;
  std::vector<std::vector<Complex>> c;
  Complex operator()(std::size_t k, std::size_t m) const { return c[k][m - k]; }
};

// b[k][j] = sum_{m=k}^{L} conj(c_m^(k)) a^(k)_{j+m}, read off the measurement
struct MeasurementCoefficients {
  std::size_t d = 0;
  std::size_t L = 0;
  std::vector<std::vector<Complex>> b;
};

enum class RecoveryStatus { UniqueUpToGlobalPhase, UniquePerComponent, Inconsistent, Undecidable };
const char* to_string(RecoveryStatus s);

struct RecoveryOutcome {
  RecoveryStatus status = RecoveryStatus::Undecidable;
  std::optional<CyclicSignal> estimate;
  ConnectivityPartition components;
  std::size_t free_phases = 0;
  double residual = 0;              // max |a[k][j] - f_j conj(f_{j-k})| over known data
  double measurement_residual = 0;  // max |measure(estimate) - X| / max X
  std::string method;
  Tolerances tolerances;
  std::vector<std::string> notes;
};

WindowCoefficients window_coeffs(const CyclicSignal& g, std::size_t L);
MeasurementCoefficients measurement_coeffs(const SpectrogramMeasurement& X, std::size_t L);

// rows of omega that are entirely true give a[k]; other rows are left out
CorrelationData recover_autocorrelations(const SpectrogramMeasurement& X, const CyclicSignal& g,
                                         const OmegaMask& omega);
std::vector<long> support_from_a0(const CorrelationData& corr, double tau_supp);

RecoveryOutcome propagate_phases(const CorrelationData& corr, const ConnectivityPartition& partition,
                                 const Tolerances& tol = {});

// measurement and window rewritten for the window shifted to start at index 0
struct CanonicalProblem {
  SpectrogramMeasurement X;
  CyclicSignal g;
  long shift = 0;
  std::size_t L = 0;
};
CanonicalProblem canonicalize(const SpectrogramMeasurement& X, const CyclicSignal& g);

RecoveryOutcome recover_full(const SpectrogramMeasurement& X, const CyclicSignal& g, const Tolerances& tol = {});
RecoveryOutcome recover_generic_short(const SpectrogramMeasurement& X, const CyclicSignal& g, std::size_t L,
                                      const Tolerances& tol = {});

std::vector<long> hole_classifier(const MeasurementCoefficients& b, std::size_t L, double tau = 1e-10);
std::vector<long> long_hole_anchors(const MeasurementCoefficients& b, double tau = 1e-10);

// g may be any shift of a window in C_L^d; the anchor refers to the signal's indices
RecoveryOutcome recover_with_hole(const SpectrogramMeasurement& X, const CyclicSignal& g, std::size_t L,
                                  long anchor, std::size_t hole_len, const Tolerances& tol = {});

RecoveryOutcome recover_missing_center(const SpectrogramMeasurement& X, const CyclicSignal& g,
                                       const Tolerances& tol = {});
RecoveryOutcome recover_missing_dc_pair(const SpectrogramMeasurement& X, const CyclicSignal& g,
                                        const Tolerances& tol = {});

struct PhaseComparison {
  Complex gamma;
  double err;
};
PhaseComparison compare_up_to_phase(const CyclicSignal& f, const CyclicSignal& f_tilde);

enum class Route { Full, GenericShort, HoleLong, HoleShort, Center, DcPair, None };
const char* to_string(Route r);

struct RouteChoice {
  Route route = Route::None;
  std::optional<long> anchor;
  std::vector<std::string> notes;
};

// full -> generic-short -> hole(L+1) -> hole(L) -> center -> dcpair -> none
RouteChoice select_route(const SpectrogramMeasurement& X, const WindowReport& report, const Tolerances& tol = {});
RecoveryOutcome recover_auto(const SpectrogramMeasurement& X, const WindowReport& report, const Tolerances& tol = {});

// forced route; hole routes pick their own anchor
RecoveryOutcome recover_with_route(const SpectrogramMeasurement& X, const WindowReport& report, Route route,
                                   const Tolerances& tol = {});

enum class Verdict { Retrievable, NotRetrievable, Undecidable };
const char* to_string(Verdict v);

struct Decision {
  Verdict verdict = Verdict::Undecidable;
  Route route = Route::None;
  std::optional<ConnectivityPartition> partition;
  std::optional<std::pair<CyclicSignal, CyclicSignal>> witness;  // equal measurements, not phase-equivalent
  std::vector<std::string> notes;
};

Decision decide_retrievability(const SpectrogramMeasurement& X, const WindowReport& report,
                               const Tolerances& tol = {});

// internal helpers shared by the recovery paths
double relative_measurement_gap(const SpectrogramMeasurement& a, const SpectrogramMeasurement& b);
void finish_outcome(RecoveryOutcome& out, const SpectrogramMeasurement& X, const CyclicSignal& g);

}  // namespace stftpr
