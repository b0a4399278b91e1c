// Recovery for the two punctured-ambiguity windows: a hole at (d/2,d/2), or
// the pair (0, +-l*).
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "stftpr/recovery.hpp"

namespace stftpr {

namespace {

Complex root(long j, long l, std::size_t d) {  // e^{-2 pi i j l / d}
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(wrap(j * l, d)) / static_cast<double>(d));
}

// V_ff(k,l) = R(k,l) / conj(V_gg(k,l)) on the rows we are allowed to divide
CorrelationData rows_except(const ComplexTable& R, const ComplexTable& V, std::size_t d, long skip) {
  const DftPlan plan(d);
  CorrelationData corr{d, {}};
  std::vector<Complex> row(d);
  for (long k = 0; k < static_cast<long>(d); ++k) {
    if (k == skip) continue;
    for (std::size_t l = 0; l < d; ++l) row[l] = R(k, l) / std::conj(V(k, l));
    std::vector<Complex> a(d);
    plan.inverse(row.data(), a.data());
    corr.a[k] = std::move(a);
  }
  return corr;
}

std::vector<long> all_nonzero_shifts(std::size_t d, long skip) {
  std::vector<long> s;
  for (long k = 1; k < static_cast<long>(d); ++k)
    if (k != skip) s.push_back(k);
  return s;
}

}  // namespace

RecoveryOutcome recover_missing_center(const SpectrogramMeasurement& X, const CyclicSignal& g,
                                       const Tolerances& tol) {
  const std::size_t d = X.dim();
  if (g.dim() != d) throw Error(ErrorCode::DimensionMismatch, "measurement and window disagree on d");
  if (d < 4 || d % 2) throw Error(ErrorCode::PreconditionViolated, "center recovery needs even d >= 4");
  const long h = static_cast<long>(d / 2);
  for (const auto& e : omega_mask_certified(g).holes())
    if (e != Entry{h, h}) throw Error(ErrorCode::PreconditionViolated, "ambiguity function vanishes off the center");

  const ComplexTable R = relation_transform(X);
  const ComplexTable V = ambiguity(g);
  CorrelationData corr = rows_except(R, V, d, h);
  const auto supp = support_from_a0(corr, tol.tau_supp);
  auto part = components_by_shifts(supp, d, all_nonzero_shifts(d, h));
  auto out = propagate_phases(corr, part, tol);
  out.method = "center";

  // an antipodal pair {j, j+d/2} is only linked through row d/2
  if (out.estimate && part.count() == 2 && supp.size() == 2 && supp[1] - supp[0] == h) {
    const long j = supp[0];
    const auto& a0 = corr.at(0);
    const double absx = std::sqrt(std::max(0.0, a0[j].real()) * std::max(0.0, a0[j + h].real()));
    // V_ff(d/2,l) e^{2 pi i j l/d} = x + (-1)^l conj(x): even l see 2 Re x, odd l see 2i Im x.
    // R(d/2,l) = V_ff(d/2,l) conj(V_gg(d/2,l)), so weighting by |V_gg|^2 gives least squares in R
    double sre = 0, wre = 0, sim = 0, wim = 0;
    for (long l = 0; l < static_cast<long>(d); ++l) {
      if (l == h) continue;
      const Complex v = V(h, l);
      const double w = std::norm(v);
      if (w == 0) continue;
      const Complex t = R(h, l) * v / root(j, l, d);  // w * V_ff(d/2,l) e^{2 pi i j l/d}
      if (l % 2) sim += t.imag(), wim += w;
      else sre += t.real(), wre += w;
    }
    double re = wre > 0 ? sre / wre / 2.0 : 0.0;
    double im = wim > 0 ? sim / wim / 2.0 : 0.0;
    // the window may nearly vanish on one parity; that part keeps only its sign and
    // takes its size from |x| = |f_j||f_{j+d/2}|, which row 0 gives accurately
    if (wre >= wim) im = std::copysign(std::sqrt(std::max(0.0, absx * absx - re * re)), im);
    else re = std::copysign(std::sqrt(std::max(0.0, absx * absx - im * im)), re);
    const Complex x(re, im);  // f_j conj(f_{j+d/2})
    CyclicSignal f = *out.estimate;
    // only the phase of x is used, the magnitudes come from row 0
    if (std::abs(f(j)) > 0 && std::abs(x) > 0) f(j + h) = std::abs(f(j + h)) * std::conj(x) * f(j) / (std::abs(x) * std::abs(f(j)));
    out.estimate = f;
    out.free_phases = 1;
    out.status = RecoveryStatus::UniqueUpToGlobalPhase;
    out.components.components = {supp};
    std::ostringstream os;
    os << "antipodal pair joined through row d/2";
    out.notes.push_back(os.str());
  }
  finish_outcome(out, X, g);
  return out;
}

RecoveryOutcome recover_missing_dc_pair(const SpectrogramMeasurement& X, const CyclicSignal& g,
                                        const Tolerances& tol) {
  const std::size_t d = X.dim();
  if (g.dim() != d) throw Error(ErrorCode::DimensionMismatch, "measurement and window disagree on d");
  if (d < 5) throw Error(ErrorCode::PreconditionViolated, "DC-pair recovery needs d >= 5");
  const auto holes = omega_mask_certified(g).holes();
  std::vector<char> row0_known(d, 1);
  for (const auto& [k, l] : holes) {
    if (k != 0) throw Error(ErrorCode::PreconditionViolated, "ambiguity function vanishes outside row 0");
    row0_known[l] = 0;
  }
  if (holes.size() > 2) throw Error(ErrorCode::PreconditionViolated, "more than one pair of zeros in row 0");
  if (holes.size() == 2) {
    const long l = holes[0].second;
    const bool ok = std::gcd(l, static_cast<long>(d)) == 1 || (d == 6 && (l == 2 || l == 4));
    if (!ok) throw Error(ErrorCode::PreconditionViolated, "zero pair shares a factor with d");
  }

  const ComplexTable R = relation_transform(X);
  const ComplexTable V = ambiguity(g);
  CorrelationData corr = rows_except(R, V, d, 0);
  std::vector<Complex> v0(d);  // known entries of V_ff(0, .)
  for (std::size_t l = 0; l < d; ++l)
    if (row0_known[l]) v0[l] = R(0, l) / std::conj(V(0, l));
  const double energy = std::max(0.0, v0[0].real());  // ||f||^2, l = 0 is never a hole

  auto row0_misfit = [&](const std::vector<double>& mag2) {
    double e = 0;
    for (std::size_t l = 0; l < d; ++l) {
      if (!row0_known[l]) continue;
      Complex s = 0;
      for (std::size_t j = 0; j < d; ++j) s += mag2[j] * root(static_cast<long>(j), static_cast<long>(l), d);
      e = std::max(e, std::abs(s - v0[l]));
    }
    return e;
  };

  // support from the off-diagonal products |f_j||f_p|
  std::vector<double> link(d, 0.0);
  for (const auto& [k, a] : corr.a)
    for (std::size_t j = 0; j < d; ++j) link[j] = std::max(link[j], std::abs(a[j]));
  std::vector<long> supp;
  for (std::size_t j = 0; j < d; ++j)
    if (link[j] > tol.tau_supp * energy) supp.push_back(static_cast<long>(j));

  std::vector<double> mag2(d, 0.0);
  std::string how;
  auto prod = [&](long p, long q) { return std::abs(corr.at(p - q)[wrap(p, d)]); };  // |f_p||f_q|
  if (supp.size() >= 3) {
    how = "triangle identity";
    for (long j : supp) {
      std::vector<long> others;
      for (long p : supp)
        if (p != j) others.push_back(p);
      std::partial_sort(others.begin(), others.begin() + 2, others.end(),
                        [&](long p, long q) { return prod(j, p) > prod(j, q); });
      const long p = others[0], q = others[1];
      mag2[j] = prod(j, p) * prod(j, q) / prod(p, q);
    }
  } else if (supp.size() == 2) {
    how = "two-point quadratic";
    const long p = supp[0], q = supp[1];
    const double P = prod(p, q) * prod(p, q);
    const double disc = std::sqrt(std::max(0.0, energy * energy - 4.0 * P));
    const double r1 = (energy + disc) / 2.0, r2 = (energy - disc) / 2.0;
    std::vector<double> A(d, 0.0), B(d, 0.0);
    A[p] = r1, A[q] = r2;
    B[p] = r2, B[q] = r1;
    mag2 = row0_misfit(A) <= row0_misfit(B) ? A : B;
  } else {
    how = "single point";
    supp.clear();
    if (energy > 0) {
      long best = 0;
      double best_err = 0;
      for (long j = 0; j < static_cast<long>(d); ++j) {
        std::vector<double> t(d, 0.0);
        t[j] = energy;
        const double e = row0_misfit(t);
        if (j == 0 || e < best_err) best = j, best_err = e;
      }
      supp.push_back(best);
      mag2[best] = energy;
    }
  }

  std::vector<Complex> a0(d);
  for (std::size_t j = 0; j < d; ++j) a0[j] = mag2[j];
  corr.a[0] = std::move(a0);
  auto out = propagate_phases(corr, components_by_shifts(supp, d, all_nonzero_shifts(d, 0)), tol);
  out.method = "dcpair";
  out.notes.push_back("magnitudes via " + how);
  const double misfit = row0_misfit(mag2);
  out.residual = std::max(out.residual, misfit);
  if (energy > 0 && misfit > tol.residual_tol * energy && out.status != RecoveryStatus::Inconsistent) {
    out.status = RecoveryStatus::Inconsistent;
    out.notes.push_back("magnitudes contradict the known DC row");
  }
  finish_outcome(out, X, g);
  return out;
}

}  // namespace stftpr
