#include "stftpr/signal.hpp"

#include <algorithm>
#include <cmath>

namespace stftpr {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::ZeroWindow: return "ZeroWindow";
    case ErrorCode::NonGenericWindow: return "NonGenericWindow";
    case ErrorCode::NotShortWindow: return "NotShortWindow";
    case ErrorCode::AnchorInvalid: return "AnchorInvalid";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::RejectionExhausted: return "RejectionExhausted";
    case ErrorCode::NonRealWindow: return "NonRealWindow";
    case ErrorCode::InvalidBundle: return "InvalidBundle";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

CyclicSignal::CyclicSignal(std::vector<Complex> entries, std::optional<long> origin_offset)
    : entries_(std::move(entries)), origin_offset_(origin_offset) {
  if (entries_.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "signal dimension must be at least 2");
}

CyclicSignal CyclicSignal::zeros(std::size_t d) {
  return CyclicSignal(std::vector<Complex>(d));
}

CyclicSignal CyclicSignal::delta(std::size_t d, long j) {
  CyclicSignal s = zeros(d);
  s(j) = 1.0;
  return s;
}

double CyclicSignal::norm2() const {
  double s = 0;
  for (auto v : entries_) s += std::norm(v);
  return s;
}

double CyclicSignal::max_abs() const {
  double m = 0;
  for (auto v : entries_) m = std::max(m, std::abs(v));
  return m;
}

bool CyclicSignal::is_real(double tol) const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [&](Complex v) { return std::abs(v.imag()) <= tol; });
}

CyclicSignal CyclicSignal::translated(long y) const {
  std::vector<Complex> out(dim());
  for (std::size_t j = 0; j < dim(); ++j) out[wrap(static_cast<long>(j) + y, dim())] = entries_[j];
  return CyclicSignal(std::move(out));
}

Complex inner(const CyclicSignal& f, const CyclicSignal& h) {
  require_same_dim(f, h);
  Complex s = 0;
  for (std::size_t j = 0; j < f.dim(); ++j) s += f.entries()[j] * std::conj(h.entries()[j]);
  return s;
}

void require_same_dim(const CyclicSignal& a, const CyclicSignal& b) {
  if (a.dim() != b.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

double SpectrogramMeasurement::total_mass() const {
  double s = 0;
  for (double v : values()) s += v;
  return s;
}

double SpectrogramMeasurement::max_value() const {
  double m = 0;
  for (double v : values()) m = std::max(m, v);
  return m;
}

}  // namespace stftpr
