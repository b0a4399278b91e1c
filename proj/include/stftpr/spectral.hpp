#pragma once

#include <map>
#include <vector>

#include "stftpr/signal.hpp"

namespace stftpr {

// Dense DFT of a fixed length. Twiddles are reduced mod d so every entry is
// one of d exactly computed roots of unity.
class DftPlan {
 public:
  explicit DftPlan(std::size_t d);
  std::size_t dim() const { return d_; }

  // out[l] = sum_j v[j] e^{-2 pi i j l / d}
  void forward(const Complex* v, Complex* out) const;
  // out[j] = (1/d) sum_l v[l] e^{+2 pi i j l / d}
  void inverse(const Complex* v, Complex* out) const;

 private:
  void apply(const Complex* v, Complex* out, bool conj_twiddles) const;

  std::size_t d_;
  std::vector<Complex> roots_;   // e^{-2 pi i m / d}
  std::vector<Complex> matrix_;  // row l holds roots_[(j l) mod d]; empty for large d
  std::vector<Complex> matrix_conj_;
};

std::vector<Complex> dft(const std::vector<Complex>& v);
std::vector<Complex> inverse_dft(const std::vector<Complex>& v);

// V_g f(k, l) = sum_j f_j conj(g_{j-k}) e^{-2 pi i j l / d}
ComplexTable stft(const CyclicSignal& f, const CyclicSignal& g);
SpectrogramMeasurement measure(const CyclicSignal& f, const CyclicSignal& g);
ComplexTable ambiguity(const CyclicSignal& g);

// R(k,l) = (1/d) sum X(k',l') e^{-2 pi i k' l / d} e^{+2 pi i l' k / d};
// equals V_ff(k,l) conj(V_gg(k,l)) when X = measure(f, g).
ComplexTable relation_transform(const SpectrogramMeasurement& X);

// finitely supported signal on the integers
using SparseLine = std::map<long, Complex>;

struct LineEmbedding {
  CyclicSignal f;
  CyclicSignal g;
  std::size_t d = 0;
  long f_extent = 0;
  long g_extent = 0;
};

long extent(const SparseLine& s);

// Shifts both supports to start at 0 and pads to d = 2 (ext f + ext g + 1) + 3, so
// no correlation with |k| <= ext f + ext g wraps around.
LineEmbedding embed_line(const SparseLine& f, const SparseLine& g);

}  // namespace stftpr
