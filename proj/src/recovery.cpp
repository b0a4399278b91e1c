#include "stftpr/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include <Eigen/Dense>

namespace stftpr {

const char* to_string(RecoveryStatus s) {
  switch (s) {
    case RecoveryStatus::UniqueUpToGlobalPhase: return "UniqueUpToGlobalPhase";
    case RecoveryStatus::UniquePerComponent: return "UniquePerComponent";
    case RecoveryStatus::Inconsistent: return "Inconsistent";
    case RecoveryStatus::Undecidable: return "Undecidable";
  }
  return "?";
}

std::vector<long> CorrelationData::known_shifts() const {
  std::vector<long> out;
  for (const auto& [k, v] : a) out.push_back(k);
  return out;
}

WindowCoefficients window_coeffs(const CyclicSignal& g, std::size_t L) {
  const std::size_t d = g.dim();
  if (2 * L >= d) throw Error(ErrorCode::InvalidArgument, "window_coeffs needs L < d/2");
  const double cut = 1e-12 * g.max_abs();
  for (std::size_t j = 0; j < d; ++j) {
    const bool inside = j <= L;
    if (inside != (std::abs(g(j)) > cut))
      throw Error(ErrorCode::NotShortWindow, "window is not supported exactly on {0..L}");
  }
  WindowCoefficients w{L, std::vector<std::vector<Complex>>(L + 1)};
  for (std::size_t k = 0; k <= L; ++k)
    for (std::size_t m = k; m <= L; ++m) w.c[k].push_back(g(m) * std::conj(g(m - k)));
  return w;
}

MeasurementCoefficients measurement_coeffs(const SpectrogramMeasurement& X, std::size_t L) {
  const std::size_t d = X.dim();
  if (2 * L >= d) throw Error(ErrorCode::InvalidArgument, "measurement_coeffs needs L < d/2");
  const ComplexTable R = relation_transform(X);
  const DftPlan plan(d);
  MeasurementCoefficients b{d, L, std::vector<std::vector<Complex>>(L + 1, std::vector<Complex>(d))};
  for (std::size_t k = 0; k <= L; ++k) plan.inverse(R.row(k).data(), b.b[k].data());
  return b;
}

CorrelationData recover_autocorrelations(const SpectrogramMeasurement& X, const CyclicSignal& g,
                                         const OmegaMask& omega) {
  const std::size_t d = X.dim();
  if (g.dim() != d || omega.d != d) throw Error(ErrorCode::DimensionMismatch, "measurement, window and mask disagree on d");
  const ComplexTable R = relation_transform(X);
  const ComplexTable V = ambiguity(g);
  const DftPlan plan(d);
  CorrelationData corr{d, {}};
  std::vector<Complex> row(d);
  for (std::size_t k = 0; k < d; ++k) {
    if (!omega.row_full(static_cast<long>(k))) continue;
    for (std::size_t l = 0; l < d; ++l) {
      if (!omega(k, l)) throw Error(ErrorCode::Internal, "division outside the mask");
      row[l] = R(k, l) / std::conj(V(k, l));
    }
    std::vector<Complex> a(d);
    plan.inverse(row.data(), a.data());
    corr.a[static_cast<long>(k)] = std::move(a);
  }
  return corr;
}

std::vector<long> support_from_a0(const CorrelationData& corr, double tau_supp) {
  const auto& a0 = corr.at(0);
  double mx = 0;
  for (auto v : a0) mx = std::max(mx, v.real());
  std::vector<long> s;
  if (mx <= 0) return s;
  for (std::size_t j = 0; j < a0.size(); ++j)
    if (a0[j].real() > tau_supp * mx) s.push_back(static_cast<long>(j));
  return s;
}

namespace {

Complex unit(Complex z) {
  const double r = std::abs(z);
  return r > 0 ? z / r : Complex(1.0);
}

}  // namespace

RecoveryOutcome propagate_phases(const CorrelationData& corr, const ConnectivityPartition& partition,
                                 const Tolerances& tol) {
  if (!corr.known(0)) throw Error(ErrorCode::InvalidArgument, "propagate_phases needs a[0]");
  const std::size_t d = corr.d;
  const auto& a0 = corr.at(0);
  double M = 0;
  for (auto v : a0) M = std::max(M, v.real());

  RecoveryOutcome out;
  out.tolerances = tol;
  out.components = partition;
  std::vector<double> mag(d, 0.0);
  for (long j : partition.universe) mag[wrap(j, d)] = std::sqrt(std::max(0.0, a0[wrap(j, d)].real()));
  std::vector<Complex> phase(d, Complex(0));
  std::vector<char> member(d, 0), seen(d, 0);

  std::vector<long> shifts;
  for (long k : corr.known_shifts())
    if (k != 0) shifts.push_back(k);
  const double edge_cut = 0.5 * tol.tau_supp * M;

  std::size_t trees = 0;
  for (const auto& comp : partition.components) {
    for (long j : comp) member[wrap(j, d)] = 1;
    for (long root : comp) {
      const std::size_t r = wrap(root, d);
      if (seen[r]) continue;
      if (root != comp.front()) out.notes.push_back("component split during propagation at index " + std::to_string(root));
      ++trees;
      seen[r] = 1;
      phase[r] = 1.0;
      std::deque<std::size_t> queue{r};
      while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (long k : shifts) {
          const std::size_t fwd = wrap(static_cast<long>(u) + k, d);
          if (member[fwd] && !seen[fwd] && std::abs(corr.at(k)[fwd]) > edge_cut) {
            phase[fwd] = unit(corr.at(k)[fwd]) * phase[u];  // a = f_fwd conj(f_u)
            seen[fwd] = 1;
            queue.push_back(fwd);
          }
          const std::size_t back = wrap(static_cast<long>(u) - k, d);
          if (member[back] && !seen[back] && std::abs(corr.at(k)[u]) > edge_cut) {
            phase[back] = phase[u] * std::conj(unit(corr.at(k)[u]));  // a = f_u conj(f_back)
            seen[back] = 1;
            queue.push_back(back);
          }
        }
      }
    }
    for (long j : comp) member[wrap(j, d)] = 0;
  }

  std::vector<Complex> f(d);
  for (std::size_t j = 0; j < d; ++j) f[j] = mag[j] * phase[j];

  // cycle check on well-conditioned edges, then the plain residual
  const double cycle_cut = std::sqrt(tol.tau_supp) * M;
  double worst_angle = 0, residual = 0;
  for (const auto& [k, a] : corr.a) {
    for (std::size_t j = 0; j < d; ++j) {
      const Complex model = f[j] * std::conj(f[wrap(static_cast<long>(j) - k, d)]);
      residual = std::max(residual, std::abs(a[j] - model));
      if (k != 0 && std::abs(a[j]) > cycle_cut && std::abs(model) > 0)
        worst_angle = std::max(worst_angle, std::abs(std::arg(a[j] * std::conj(model))));
    }
  }
  out.residual = residual;
  out.estimate = CyclicSignal(std::move(f));
  out.free_phases = trees;
  if (worst_angle > tol.phase_tol) {
    out.status = RecoveryStatus::Inconsistent;
    std::ostringstream os;
    os << "phase cycle mismatch " << worst_angle << " rad";
    out.notes.push_back(os.str());
  } else if (M > 0 && residual > tol.residual_tol * M) {
    out.status = RecoveryStatus::Inconsistent;
    out.notes.push_back("autocorrelation residual above tolerance");
  } else {
    out.status = trees <= 1 ? RecoveryStatus::UniqueUpToGlobalPhase : RecoveryStatus::UniquePerComponent;
  }
  return out;
}

double relative_measurement_gap(const SpectrogramMeasurement& a, const SpectrogramMeasurement& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "measurement sizes differ");
  double diff = 0, scale = 0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    diff = std::max(diff, std::abs(a.values()[i] - b.values()[i]));
    scale = std::max({scale, a.values()[i], b.values()[i]});
  }
  return scale > 0 ? diff / scale : diff;
}

void finish_outcome(RecoveryOutcome& out, const SpectrogramMeasurement& X, const CyclicSignal& g) {
  if (!out.estimate) return;
  out.measurement_residual = relative_measurement_gap(measure(*out.estimate, g), X);
  if (out.status != RecoveryStatus::Inconsistent && out.measurement_residual > out.tolerances.residual_tol) {
    out.status = RecoveryStatus::Inconsistent;
    out.notes.push_back("estimate does not reproduce the measurement");
  }
}

CanonicalProblem canonicalize(const SpectrogramMeasurement& X, const CyclicSignal& g) {
  const std::size_t d = X.dim();
  if (g.dim() != d) throw Error(ErrorCode::DimensionMismatch, "measurement and window disagree on d");
  const auto supp = support_of(g);
  if (supp.empty()) throw Error(ErrorCode::ZeroWindow, "window is identically zero");
  const CanonicalShift cs = canonical_shift(supp, d);
  CanonicalProblem p{SpectrogramMeasurement(d), g.translated(-cs.shift), cs.shift, cs.length};
  // g = T_s g0 gives X_g(k,l) = X_g0(k+s,l)
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) p.X(k, l) = X(static_cast<long>(k) - cs.shift, l);
  return p;
}

RecoveryOutcome recover_full(const SpectrogramMeasurement& X, const CyclicSignal& g, const Tolerances& tol) {
  const OmegaMask omega = omega_mask(g, tol.tau_rel);
  if (!omega.all_true()) throw Error(ErrorCode::PreconditionViolated, "ambiguity function has zeros");
  const CorrelationData corr = recover_autocorrelations(X, g, omega);
  const auto supp = support_from_a0(corr, tol.tau_supp);
  auto out = propagate_phases(corr, components_by_shifts(supp, X.dim(), corr.known_shifts()), tol);
  out.method = "full";
  finish_outcome(out, X, g);
  return out;
}

RecoveryOutcome recover_generic_short(const SpectrogramMeasurement& X, const CyclicSignal& g, std::size_t L,
                                      const Tolerances& tol) {
  const std::size_t d = X.dim();
  const OmegaMask omega = omega_mask(g, tol.tau_rel);
  if (!omega.same_support(omega_L_d(d, L)))
    throw Error(ErrorCode::NonGenericWindow, "ambiguity support differs from the full band of width L");
  const CorrelationData corr = recover_autocorrelations(X, g, omega);
  const auto supp = support_from_a0(corr, tol.tau_supp);
  auto out = propagate_phases(corr, components_mod_d(supp, d, L), tol);
  out.method = "generic";
  finish_outcome(out, X, g);
  return out;
}

namespace {

double b_scale(const MeasurementCoefficients& b) {
  double s = 0;
  for (auto v : b.b[0]) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

std::vector<long> long_hole_anchors(const MeasurementCoefficients& b, double tau) {
  const double cut = tau * b_scale(b);
  std::vector<long> out;
  for (std::size_t j = 0; j < b.d; ++j)
    if (std::abs(b.b[0][j]) <= cut) out.push_back(static_cast<long>(j));
  return out;
}

std::vector<long> hole_classifier(const MeasurementCoefficients& b, std::size_t L, double tau) {
  const double scale = b_scale(b);
  std::vector<long> out;
  if (scale == 0) return out;
  const double cut = tau * scale;
  const long d = static_cast<long>(b.d);
  const long LL = static_cast<long>(L);
  for (long js = 0; js < d; ++js) {
    bool zeros = true;
    for (long k = 1; k <= LL && zeros; ++k)
      for (long j = js + 1 - k; j <= js + k; ++j)
        if (std::abs(b.b[k][wrap(j, b.d)]) > cut) {
          zeros = false;
          break;
        }
    if (!zeros) continue;
    bool mass_before = false;
    for (long k = 1; k <= LL; ++k)
      if (std::abs(b.b[k][wrap(js - k, b.d)]) > cut) mass_before = true;
    if (mass_before) out.push_back(js);
  }
  return out;
}

RecoveryOutcome recover_with_hole(const SpectrogramMeasurement& X, const CyclicSignal& g, std::size_t L,
                                  long anchor, std::size_t hole_len, const Tolerances& tol) {
  const std::size_t d = X.dim();
  if (hole_len != L && hole_len != L + 1)
    throw Error(ErrorCode::InvalidArgument, "hole length must be L or L+1");
  const CanonicalProblem cp = canonicalize(X, g);
  if (cp.L != L) throw Error(ErrorCode::NotShortWindow, "window length does not match L");
  const WindowCoefficients c = window_coeffs(cp.g, L);
  const MeasurementCoefficients b = measurement_coeffs(cp.X, L);
  const double scale = b_scale(b);
  const long js = static_cast<long>(wrap(anchor, d));
  if (hole_len == L + 1) {
    if (std::abs(b.b[0][js]) > tol.tau_supp * scale)
      throw Error(ErrorCode::AnchorInvalid, "b^(0) does not vanish at the anchor");
  } else {
    const auto anchors = hole_classifier(b, L, tol.tau_supp);
    if (std::find(anchors.begin(), anchors.end(), js) == anchors.end())
      throw Error(ErrorCode::AnchorInvalid, "anchor fails the hole classifier");
  }

  const long LL = static_cast<long>(L);
  const long D = static_cast<long>(d);
  CorrelationData corr{d, {}};
  double crosscheck = 0, banded = 0;
  for (long k = 0; k <= LL; ++k) {
    const long start = hole_len == L + 1 ? js : js + 1;
    const long len = std::min(D, hole_len == L + 1 ? LL + k + 1 : LL + k);
    std::vector<Complex> a(d, Complex(0));
    const long unknown = D - len;
    std::vector<Complex> fwd(d), bwd(d);
    // forward: a_t from b_{t-L}, dividing by the trailing coefficient
    {
      std::vector<Complex> w(d, Complex(0));
      for (long i = 0; i < unknown; ++i) {
        const long t = start + len + i;
        const long j = t - LL;
        Complex s = b.b[k][wrap(j, d)];
        for (long m = k; m < LL; ++m) s -= std::conj(c(k, m)) * w[wrap(j + m, d)];
        w[wrap(t, d)] = s / std::conj(c(k, L));
      }
      fwd = w;
    }
    // backward: a_t from b_{t-k}, dividing by the leading coefficient
    {
      std::vector<Complex> w(d, Complex(0));
      for (long i = 0; i < unknown; ++i) {
        const long t = start - 1 - i;
        const long j = t - k;
        Complex s = b.b[k][wrap(j, d)];
        for (long m = k + 1; m <= LL; ++m) s -= std::conj(c(k, m)) * w[wrap(j + m, d)];
        w[wrap(t, d)] = s / std::conj(c(k, k));
      }
      bwd = w;
    }
    // the passes are unstable in the direction where the band polynomial has large roots;
    // least squares over all d equations uses both ends of the block at once
    for (long i = 0; i < unknown; ++i) {
      const std::size_t t = wrap(start + len + i, d);
      crosscheck = std::max(crosscheck, std::abs(fwd[t] - bwd[t]));
    }
    if (unknown > 0) {
      Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(D, unknown);
      Eigen::VectorXcd rhs(D);
      std::vector<long> column(d, -1);
      for (long i = 0; i < unknown; ++i) column[wrap(start + len + i, d)] = i;
      for (long j = 0; j < D; ++j) {
        rhs(j) = b.b[k][j];
        for (long m = k; m <= LL; ++m) {
          const long col = column[wrap(j + m, d)];
          if (col >= 0) A(j, col) += std::conj(c(k, m));
        }
      }
      const Eigen::VectorXcd x = A.colPivHouseholderQr().solve(rhs);
      for (long i = 0; i < unknown; ++i) a[wrap(start + len + i, d)] = x(i);
    }
    // every banded equation, including the ones not used above, must hold
    for (long j = 0; j < D; ++j) {
      Complex s = b.b[k][wrap(j, d)];
      for (long m = k; m <= LL; ++m) s -= std::conj(c(k, m)) * a[wrap(j + m, d)];
      banded = std::max(banded, std::abs(s));
    }
    corr.a[k] = std::move(a);
  }
  for (long k = 1; k <= LL; ++k) {
    std::vector<Complex> mirror(d);
    for (long j = 0; j < D; ++j) mirror[j] = std::conj(corr.a[k][wrap(j + k, d)]);
    corr.a[static_cast<long>(wrap(-k, d))] = std::move(mirror);
  }

  const auto supp = support_from_a0(corr, tol.tau_supp);
  auto out = propagate_phases(corr, components_mod_d(supp, d, L), tol);
  out.method = hole_len == L + 1 ? "hole(L+1)" : "hole(L)";
  std::ostringstream os;
  os << "forward/backward cross-check " << crosscheck << ", banded residual " << banded;
  out.notes.push_back(os.str());
  // the two passes drift apart geometrically away from their starts, so only the
  // equation residual decides consistency
  if (scale > 0 && banded > tol.residual_tol * scale && out.status != RecoveryStatus::Inconsistent) {
    out.status = RecoveryStatus::Inconsistent;
    out.notes.push_back("banded equations not satisfied");
  }
  finish_outcome(out, X, g);
  return out;
}

PhaseComparison compare_up_to_phase(const CyclicSignal& f, const CyclicSignal& f_tilde) {
  require_same_dim(f, f_tilde);
  const double nf = f.norm2();
  if (nf == 0) throw Error(ErrorCode::InvalidArgument, "reference signal is zero");
  const Complex ip = inner(f_tilde, f);
  const Complex gamma = std::abs(ip) > 0 ? ip / std::abs(ip) : Complex(1.0);
  double e = 0;
  for (std::size_t j = 0; j < f.dim(); ++j) e += std::norm(f_tilde.entries()[j] - gamma * f.entries()[j]);
  return {gamma, std::sqrt(e / nf)};
}

}  // namespace stftpr
