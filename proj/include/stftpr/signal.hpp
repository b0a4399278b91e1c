#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stftpr {

using Complex = std::complex<double>;

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  EmptySupport,
  ZeroWindow,
  NonGenericWindow,
  NotShortWindow,
  AnchorInvalid,
  PreconditionViolated,
  InsufficientSamples,
  RejectionExhausted,
  NonRealWindow,
  InvalidBundle,
  MalformedInput,
  Internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// residue of a in [0, d)
inline std::size_t wrap(long a, std::size_t d) {
  long m = a % static_cast<long>(d);
  return static_cast<std::size_t>(m < 0 ? m + static_cast<long>(d) : m);
}

class CyclicSignal {
 public:
  CyclicSignal() = default;
  explicit CyclicSignal(std::vector<Complex> entries,
                        std::optional<long> origin_offset = std::nullopt);

  static CyclicSignal zeros(std::size_t d);
  static CyclicSignal delta(std::size_t d, long j);

  std::size_t dim() const { return entries_.size(); }
  Complex operator()(long j) const { return entries_[wrap(j, dim())]; }
  Complex& operator()(long j) { return entries_[wrap(j, dim())]; }

  std::span<const Complex> entries() const { return entries_; }
  std::span<Complex> entries() { return entries_; }
  const Complex* data() const { return entries_.data(); }
  Complex* data() { return entries_.data(); }

  std::optional<long> origin_offset() const { return origin_offset_; }
  void set_origin_offset(std::optional<long> o) { origin_offset_ = o; }

  double norm2() const;  // squared l2 norm
  double max_abs() const;
  bool is_real(double tol = 0.0) const;
  // (T_y f)_j = f_{j-y}
  CyclicSignal translated(long y) const;

 private:
  std::vector<Complex> entries_;
  std::optional<long> origin_offset_;
};

Complex inner(const CyclicSignal& f, const CyclicSignal& h);  // sum f_j conj(h_j)
void require_same_dim(const CyclicSignal& a, const CyclicSignal& b);

// d x d table indexed (k, l) with both indices taken mod d
template <class T>
class SquareTable {
 public:
  SquareTable() = default;
  explicit SquareTable(std::size_t d) : d_(d), v_(d * d) {}
  SquareTable(std::size_t d, std::vector<T> values) : d_(d), v_(std::move(values)) {
    if (v_.size() != d * d)
      throw Error(ErrorCode::DimensionMismatch, "table needs d*d values");
  }

  std::size_t dim() const { return d_; }
  T operator()(long k, long l) const { return v_[wrap(k, d_) * d_ + wrap(l, d_)]; }
  T& operator()(long k, long l) { return v_[wrap(k, d_) * d_ + wrap(l, d_)]; }
  std::span<const T> row(std::size_t k) const { return {v_.data() + k * d_, d_}; }
  std::span<T> row(std::size_t k) { return {v_.data() + k * d_, d_}; }
  const std::vector<T>& values() const { return v_; }

 private:
  std::size_t d_ = 0;
  std::vector<T> v_;
};

using ComplexTable = SquareTable<Complex>;

// squared STFT magnitudes
class SpectrogramMeasurement : public SquareTable<double> {
 public:
  using SquareTable<double>::SquareTable;
  double total_mass() const;
  double max_value() const;
};

}  // namespace stftpr
