#include "stftpr/line.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace stftpr {

const char* to_string(LimitedRegime r) {
  switch (r) {
    case LimitedRegime::Trivial: return "trivial";
    case LimitedRegime::Shortcut: return "shortcut";
    case LimitedRegime::Induction: return "induction";
  }
  return "?";
}

DifferenceSet line_difference_set(const CyclicSignal& g) {
  return difference_set(support_of(g), std::nullopt);
}

SparseLine to_line(const CyclicSignal& embedded, double rel_tol) {
  SparseLine out;
  const long o = embedded.origin_offset().value_or(0);
  for (long j : support_of(embedded, rel_tol)) out[j + o] = embedded(j);
  return out;
}

namespace {

// least squares for a_j, j in [lo..hi], from sum_j a_j z_m^{-j} = v_m
std::vector<Complex> solve_vandermonde(const std::vector<Complex>& z, const std::vector<Complex>& v, long lo, long hi) {
  const long n = hi - lo + 1;
  Eigen::MatrixXcd A(static_cast<long>(z.size()), n);
  Eigen::VectorXcd rhs(static_cast<long>(z.size()));
  for (std::size_t m = 0; m < z.size(); ++m) {
    for (long j = lo; j <= hi; ++j) A(static_cast<long>(m), j - lo) = std::pow(z[m], -static_cast<double>(j));
    rhs(static_cast<long>(m)) = v[m];
  }
  Eigen::VectorXcd x = A.colPivHouseholderQr().solve(rhs);
  return std::vector<Complex>(x.data(), x.data() + n);
}

}  // namespace

RecoveryOutcome recover_line(const SpectrogramMeasurement& X, const CyclicSignal& g, long signal_extent,
                             const Tolerances& tol) {
  const std::size_t d = X.dim();
  if (g.dim() != d) throw Error(ErrorCode::DimensionMismatch, "measurement and window disagree on d");
  const auto gsupp = support_of(g);
  if (gsupp.empty()) throw Error(ErrorCode::ZeroWindow, "window is identically zero");
  const long N = signal_extent;
  const long gext = gsupp.back() - gsupp.front();
  if (N < 0 || 2 * (N + gext) + 3 > static_cast<long>(d))
    throw Error(ErrorCode::PreconditionViolated, "embedding too small for a wrap-free line problem");
  const DifferenceSet dg = line_difference_set(g);

  const ComplexTable R = relation_transform(X);
  const ComplexTable V = ambiguity(g);
  const OmegaMask omega = omega_mask(g, tol.tau_rel);
  const double two_pi = 2.0 * std::numbers::pi;

  CorrelationData corr{d, {}};
  for (long k = 0; k <= N; ++k) {
    if (!dg.contains(k)) continue;
    // a nonzero polynomial in z of degree <= ext g: few masked zeros, many equations left
    std::vector<Complex> z, v;
    for (std::size_t l = 0; l < d; ++l) {
      if (!omega(k, l)) continue;
      z.push_back(std::polar(1.0, two_pi * static_cast<double>(l) / static_cast<double>(d)));
      v.push_back(R(k, l) / std::conj(V(k, l)));
    }
    if (static_cast<long>(z.size()) < N - k + 1)
      throw Error(ErrorCode::Internal, "too few unmasked frequencies in a known row");
    const auto sol = solve_vandermonde(z, v, k, N);
    std::vector<Complex> a(d, Complex(0));
    for (long j = k; j <= N; ++j) a[j] = sol[j - k];
    corr.a[k] = std::move(a);
  }
  for (long k = 1; k <= N; ++k) {
    if (!corr.known(k)) continue;
    std::vector<Complex> mirror(d);
    for (long j = 0; j < static_cast<long>(d); ++j) mirror[j] = std::conj(corr.a[k][wrap(j + k, d)]);
    corr.a[static_cast<long>(d) - k] = std::move(mirror);
  }

  const auto supp = support_from_a0(corr, tol.tau_supp);
  auto out = propagate_phases(corr, components_line(supp, dg), tol);
  out.method = "line";
  finish_outcome(out, X, g);
  if (out.estimate && g.origin_offset()) out.estimate->set_origin_offset(g.origin_offset());
  return out;
}

Decision decide_line(const SpectrogramMeasurement& X, const CyclicSignal& g, long signal_extent,
                     const Tolerances& tol) {
  const RecoveryOutcome out = recover_line(X, g, signal_extent, tol);
  Decision dec;
  dec.partition = out.components;
  if (out.status == RecoveryStatus::Inconsistent) {
    dec.verdict = Verdict::Undecidable;
    dec.notes.push_back("line recovery inconsistent");
    return dec;
  }
  if (out.components.connected()) {
    dec.verdict = Verdict::Retrievable;
    return dec;
  }
  dec.verdict = Verdict::NotRetrievable;
  CyclicSignal twisted = *out.estimate;
  for (long j : out.components.components.back()) twisted(j) = -twisted(j);
  dec.witness = std::make_pair(*out.estimate, twisted);
  return dec;
}

LineSamples sample_line_correlations(const std::vector<Complex>& f, long kstar) {
  const long N = static_cast<long>(f.size()) - 1;
  LineSamples s;
  for (long k = 0; k <= N; ++k) {
    const long count = (k >= 1 && k <= kstar) ? kstar + 1 : N + 1;
    for (long m = 0; m < count; ++m) {
      const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * m / static_cast<double>(count));
      Complex v = 0;
      for (long j = k; j <= N; ++j) v += f[j] * std::conj(f[j - k]) * std::pow(z, -static_cast<double>(j));
      s[k].push_back({z, v});
    }
  }
  return s;
}

LineLimitedOutcome recover_line_limited(const LineSamples& samples, long kstar, long N, const Tolerances& tol) {
  if (N < 0 || kstar < 0) throw Error(ErrorCode::InvalidArgument, "negative extent or k*");
  auto row = [&](long k) -> const std::vector<LineSample>& {
    static const std::vector<LineSample> empty;
    auto it = samples.find(k);
    return it == samples.end() ? empty : it->second;
  };
  auto full_row = [&](long k) {
    const auto& r = row(k);
    if (static_cast<long>(r.size()) < N - k + 1)
      throw Error(ErrorCode::InsufficientSamples, "row " + std::to_string(k) + " has too few samples");
    std::vector<Complex> z, v;
    for (const auto& s : r) z.push_back(s.z), v.push_back(s.value);
    std::vector<Complex> a(N + 1, Complex(0));
    const auto sol = solve_vandermonde(z, v, k, N);
    for (long j = k; j <= N; ++j) a[j] = sol[j - k];
    return a;
  };

  LineLimitedOutcome out;
  out.estimate.assign(N + 1, Complex(0));
  const auto a0 = full_row(0);
  double M = 0;
  for (auto v : a0) M = std::max(M, v.real());
  std::vector<long> supp;
  for (long j = 0; j <= N; ++j)
    if (M > 0 && a0[j].real() > tol.tau_supp * M) supp.push_back(j);
  if (supp.empty()) return out;
  const long j0 = supp.front(), J = supp.back(), span = J - j0;
  auto& f = out.estimate;
  f[j0] = std::sqrt(a0[j0].real());

  if (span == 0) {
    out.regime = LimitedRegime::Trivial;
  } else if (span >= 2 * kstar + 1) {
    out.regime = LimitedRegime::Shortcut;
    for (long j = j0 + kstar + 1; j <= J; ++j) f[j] = full_row(j - j0)[j] / f[j0];
    for (long j = j0 + 1; j <= J - kstar - 1; ++j) f[j] = std::conj(full_row(J - j)[J] / f[J]);
  } else {
    out.regime = LimitedRegime::Induction;
    const auto& top = row(span);
    if (top.empty()) throw Error(ErrorCode::InsufficientSamples, "no sample for the outermost row");
    f[J] = top.front().value * std::pow(top.front().z, static_cast<double>(J)) / f[j0];
    for (long l = 0; j0 + l + 1 <= J - l - 1; ++l) {
      const long K = span - (l + 1);
      const auto& r = row(K);
      if (K >= 1 && K <= kstar && static_cast<long>(r.size()) < kstar + 1)
        throw Error(ErrorCode::InsufficientSamples, "row " + std::to_string(K) + " has fewer than k*+1 samples");
      // z^J W(z) = f_{J-l-1} conj(f_j0) z^{l+1} + f_J conj(f_{j0+l+1})
      auto zW = [&](const LineSample& s) {
        Complex w = s.value;
        for (long j = J - l; j <= J - 1; ++j) w -= f[j] * std::conj(f[j - K]) * std::pow(s.z, -static_cast<double>(j));
        return w * std::pow(s.z, static_cast<double>(J));
      };
      std::size_t best0 = 0, best1 = 0;
      double sep = 0;
      for (std::size_t p = 0; p < r.size(); ++p)
        for (std::size_t q = p + 1; q < r.size(); ++q) {
          const double s = std::abs(std::pow(r[p].z, static_cast<double>(l + 1)) - std::pow(r[q].z, static_cast<double>(l + 1)));
          if (s > sep) sep = s, best0 = p, best1 = q;
        }
      if (sep < 1e-8) throw Error(ErrorCode::InsufficientSamples, "no sample pair separates z^{l+1} in row " + std::to_string(K));
      const Complex z0l = std::pow(r[best0].z, static_cast<double>(l + 1));
      const Complex z1l = std::pow(r[best1].z, static_cast<double>(l + 1));
      const Complex w0 = zW(r[best0]), w1 = zW(r[best1]);
      const Complex lo_val = (w0 - w1) / (std::conj(f[j0]) * (z0l - z1l));  // f_{J-l-1}
      f[J - l - 1] = lo_val;
      if (j0 + l + 1 < J - l - 1) f[j0 + l + 1] = std::conj((w0 - lo_val * std::conj(f[j0]) * z0l) / f[J]);
    }
  }

  // misfit against every sample
  for (const auto& [k, rs] : samples)
    for (const auto& s : rs) {
      Complex v = 0;
      for (long j = std::max(0L, k); j <= N; ++j)
        if (j - k >= 0 && j - k <= N) v += f[j] * std::conj(f[j - k]) * std::pow(s.z, -static_cast<double>(j));
      out.residual = std::max(out.residual, std::abs(v - s.value));
    }
  out.consistent = out.residual <= tol.residual_tol * M;
  return out;
}

}  // namespace stftpr
