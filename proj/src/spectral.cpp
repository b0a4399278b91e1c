#include "stftpr/spectral.hpp"

#include <cmath>
#include <numbers>

#include "stftpr/kernels.hpp"

namespace stftpr {

namespace {
constexpr std::size_t kMatrixLimit = 1024;  // 16 MiB of twiddles
}

DftPlan::DftPlan(std::size_t d) : d_(d), roots_(d) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "DFT length must be positive");
  for (std::size_t m = 0; m < d; ++m) {
    // long double angle keeps the reduced roots accurate to the last bit
    long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(m) /
                      static_cast<long double>(d);
    roots_[m] = Complex(static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang)));
  }
  if (d <= kMatrixLimit) {
    matrix_.resize(d * d);
    matrix_conj_.resize(d * d);
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t j = 0; j < d; ++j) {
        Complex w = roots_[(j * l) % d];
        matrix_[l * d + j] = w;
        matrix_conj_[l * d + j] = std::conj(w);
      }
  }
}

void DftPlan::apply(const Complex* v, Complex* out, bool conj_twiddles) const {
  const auto& k = kernels::active();
  if (!matrix_.empty()) {
    const auto& m = conj_twiddles ? matrix_conj_ : matrix_;
    for (std::size_t l = 0; l < d_; ++l) out[l] = k.dot(m.data() + l * d_, v, d_);
    return;
  }
  std::vector<Complex> row(d_);
  for (std::size_t l = 0; l < d_; ++l) {
    for (std::size_t j = 0; j < d_; ++j) {
      Complex w = roots_[(j * l) % d_];
      row[j] = conj_twiddles ? std::conj(w) : w;
    }
    out[l] = k.dot(row.data(), v, d_);
  }
}

void DftPlan::forward(const Complex* v, Complex* out) const { apply(v, out, false); }

void DftPlan::inverse(const Complex* v, Complex* out) const {
  apply(v, out, true);
  const double s = 1.0 / static_cast<double>(d_);
  for (std::size_t j = 0; j < d_; ++j) out[j] *= s;
}

std::vector<Complex> dft(const std::vector<Complex>& v) {
  if (v.size() < 2) throw Error(ErrorCode::DimensionMismatch, "dft needs length >= 2");
  DftPlan plan(v.size());
  std::vector<Complex> out(v.size());
  plan.forward(v.data(), out.data());
  return out;
}

std::vector<Complex> inverse_dft(const std::vector<Complex>& v) {
  if (v.size() < 2) throw Error(ErrorCode::DimensionMismatch, "inverse_dft needs length >= 2");
  DftPlan plan(v.size());
  std::vector<Complex> out(v.size());
  plan.inverse(v.data(), out.data());
  return out;
}

ComplexTable stft(const CyclicSignal& f, const CyclicSignal& g) {
  require_same_dim(f, g);
  const std::size_t d = f.dim();
  const auto& k = kernels::active();
  DftPlan plan(d);
  ComplexTable out(d);
  std::vector<Complex> shifted(d), prod(d);
  for (std::size_t s = 0; s < d; ++s) {
    for (std::size_t j = 0; j < d; ++j) shifted[j] = g(static_cast<long>(j) - static_cast<long>(s));
    k.mul_conj(f.data(), shifted.data(), prod.data(), d);
    plan.forward(prod.data(), out.row(s).data());
  }
  return out;
}

SpectrogramMeasurement measure(const CyclicSignal& f, const CyclicSignal& g) {
  ComplexTable v = stft(f, g);
  const std::size_t d = f.dim();
  std::vector<double> sq(d * d);
  kernels::active().sq_mag(v.values().data(), sq.data(), d * d);
  return SpectrogramMeasurement(d, std::move(sq));
}

ComplexTable ambiguity(const CyclicSignal& g) { return stft(g, g); }

ComplexTable relation_transform(const SpectrogramMeasurement& X) {
  const std::size_t d = X.dim();
  DftPlan plan(d);
  // Y(k', k) = sum_l' X(k', l') e^{+2 pi i l' k / d}
  ComplexTable Y(d);
  std::vector<Complex> row(d), col(d), tmp(d);
  for (std::size_t kp = 0; kp < d; ++kp) {
    for (std::size_t l = 0; l < d; ++l) row[l] = X(kp, l);
    plan.inverse(row.data(), Y.row(kp).data());
    for (auto& y : Y.row(kp)) y *= static_cast<double>(d);
  }
  ComplexTable R(d);
  const double inv_d = 1.0 / static_cast<double>(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t kp = 0; kp < d; ++kp) col[kp] = Y(kp, k);
    plan.forward(col.data(), tmp.data());
    for (std::size_t l = 0; l < d; ++l) R(k, l) = tmp[l] * inv_d;
  }
  return R;
}

long extent(const SparseLine& s) {
  if (s.empty()) throw Error(ErrorCode::EmptySupport, "empty line support");
  return s.rbegin()->first - s.begin()->first;
}

LineEmbedding embed_line(const SparseLine& f, const SparseLine& g) {
  if (f.empty() || g.empty()) throw Error(ErrorCode::EmptySupport, "embed_line needs nonempty supports");
  LineEmbedding e;
  e.f_extent = extent(f);
  e.g_extent = extent(g);
  e.d = static_cast<std::size_t>(2 * (e.f_extent + e.g_extent + 1) + 3);
  auto place = [&](const SparseLine& s) {
    std::vector<Complex> v(e.d);
    const long o = s.begin()->first;
    for (const auto& [j, x] : s) v[static_cast<std::size_t>(j - o)] = x;
    return CyclicSignal(std::move(v), o);
  };
  e.f = place(f);
  e.g = place(g);
  return e;
}

}  // namespace stftpr
