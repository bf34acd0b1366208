#include <cmath>
#include <limits>

#include "loewner_lab/simd/kernels.hpp"

namespace loewner_lab::simd::scalar {

void loewner_fill(const LoewnerFillArgs& a) {
  const std::size_t m = a.mu.size();
  const std::size_t n = a.lambda.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Complex lam = a.lambda[j];
    const Complex wj = a.w[j];
    const Complex lw = lam * wj;
    Complex* lcol = a.loewner + static_cast<std::ptrdiff_t>(j) * a.ld;
    Complex* scol = a.shifted + static_cast<std::ptrdiff_t>(j) * a.ld;
    for (std::size_t i = 0; i < m; ++i) {
      const Complex den = a.mu[i] - lam;
      lcol[i] = (a.v[i] - wj) / den;
      scol[i] = (a.mu[i] * a.v[i] - lw) / den;
    }
  }
}

double max_abs(std::span<const Complex> values, std::size_t* argmax) {
  double best = 0.0;
  std::size_t where = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double re = values[i].real();
    const double im = values[i].imag();
    const double sq = re * re + im * im;
    if (sq > best) {
      best = sq;
      where = i;
    }
  }
  if (argmax) *argmax = where;
  return std::sqrt(best);
}

double max_value(std::span<const double> values, std::size_t* argmax) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t where = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > best) {
      best = values[i];
      where = i;
    }
  }
  if (argmax) *argmax = where;
  return best;
}

}  // namespace loewner_lab::simd::scalar
