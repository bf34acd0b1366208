// Compiled with -mavx2 -mfma; only reached after the runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "loewner_lab/simd/kernels.hpp"

namespace loewner_lab::simd::avx2 {
namespace {

// Two complex doubles per register, interleaved (re0, im0, re1, im1).
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), _mm256_mul_pd(a_swap, b_im));
}

// a / d computed as a * conj(d) / |d|^2.
inline __m256d cdiv(__m256d a, __m256d d) {
  const __m256d d_re = _mm256_movedup_pd(d);
  const __m256d d_im = _mm256_permute_pd(d, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  // a * conj(d): (ar*dr + ai*di, ai*dr - ar*di)
  const __m256d t1 = _mm256_mul_pd(a, d_re);
  const __m256d t2 = _mm256_mul_pd(a_swap, d_im);
  const __m256d num = _mm256_addsub_pd(t1, _mm256_sub_pd(_mm256_setzero_pd(), t2));
  const __m256d sq = _mm256_mul_pd(d, d);
  const __m256d norm = _mm256_hadd_pd(sq, sq);
  return _mm256_div_pd(num, norm);
}

inline __m256d load2(const Complex* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}

inline void store2(Complex* p, __m256d x) {
  _mm256_storeu_pd(reinterpret_cast<double*>(p), x);
}

inline __m256d broadcast(Complex z) {
  return _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag());
}

}  // namespace

void loewner_fill(const LoewnerFillArgs& a) {
  const std::size_t m = a.mu.size();
  const std::size_t n = a.lambda.size();
  const std::size_t m2 = m - m % 2;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex lam = a.lambda[j];
    const Complex wj = a.w[j];
    const __m256d lam_v = broadcast(lam);
    const __m256d w_v = broadcast(wj);
    const __m256d lw_v = broadcast(lam * wj);
    Complex* lcol = a.loewner + static_cast<std::ptrdiff_t>(j) * a.ld;
    Complex* scol = a.shifted + static_cast<std::ptrdiff_t>(j) * a.ld;
    std::size_t i = 0;
    for (; i < m2; i += 2) {
      const __m256d mu_v = load2(&a.mu[i]);
      const __m256d v_v = load2(&a.v[i]);
      const __m256d den = _mm256_sub_pd(mu_v, lam_v);
      store2(lcol + i, cdiv(_mm256_sub_pd(v_v, w_v), den));
      store2(scol + i, cdiv(_mm256_sub_pd(cmul(mu_v, v_v), lw_v), den));
    }
    for (; i < m; ++i) {
      const Complex den = a.mu[i] - lam;
      lcol[i] = (a.v[i] - wj) / den;
      scol[i] = (a.mu[i] * a.v[i] - lam * wj) / den;
    }
  }
}

double max_abs(std::span<const Complex> values, std::size_t* argmax) {
  const std::size_t n = values.size();
  const std::size_t n2 = n - n % 2;
  // Lane-wise running maxima of |z|^2 with their indices (as doubles).
  __m256d best = _mm256_setzero_pd();
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0.0, 0.0, 1.0, 1.0);
  const __m256d step = _mm256_set1_pd(2.0);
  for (std::size_t i = 0; i < n2; i += 2) {
    const __m256d z = load2(&values[i]);
    const __m256d sq = _mm256_mul_pd(z, z);
    const __m256d norm = _mm256_hadd_pd(sq, sq);  // (|z0|^2, |z0|^2, |z1|^2, |z1|^2)
    const __m256d gt = _mm256_cmp_pd(norm, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, norm, gt);
    best_idx = _mm256_blendv_pd(best_idx, idx, gt);
    idx = _mm256_add_pd(idx, step);
  }
  alignas(32) double b[4];
  alignas(32) double bi[4];
  _mm256_store_pd(b, best);
  _mm256_store_pd(bi, best_idx);
  double out = b[0];
  std::size_t where = static_cast<std::size_t>(bi[0]);
  if (b[2] > out || (b[2] == out && bi[2] < bi[0] && b[2] > 0.0)) {
    out = b[2];
    where = static_cast<std::size_t>(bi[2]);
  }
  for (std::size_t i = n2; i < n; ++i) {
    const double sq = std::norm(values[i]);
    if (sq > out) {
      out = sq;
      where = i;
    }
  }
  if (argmax) *argmax = where;
  return std::sqrt(out);
}

double max_value(std::span<const double> values, std::size_t* argmax) {
  const std::size_t n = values.size();
  const std::size_t n4 = n - n % 4;
  double out = -std::numeric_limits<double>::infinity();
  std::size_t where = 0;
  if (n4 > 0) {
    __m256d best = _mm256_set1_pd(out);
    __m256d best_idx = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d step = _mm256_set1_pd(4.0);
    for (std::size_t i = 0; i < n4; i += 4) {
      const __m256d x = _mm256_loadu_pd(&values[i]);
      const __m256d gt = _mm256_cmp_pd(x, best, _CMP_GT_OQ);
      best = _mm256_blendv_pd(best, x, gt);
      best_idx = _mm256_blendv_pd(best_idx, idx, gt);
      idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double b[4];
    alignas(32) double bi[4];
    _mm256_store_pd(b, best);
    _mm256_store_pd(bi, best_idx);
    for (int lane = 0; lane < 4; ++lane) {
      const auto lane_idx = static_cast<std::size_t>(bi[lane]);
      if (b[lane] > out || (b[lane] == out && lane_idx < where)) {
        out = b[lane];
        where = lane_idx;
      }
    }
  }
  for (std::size_t i = n4; i < n; ++i) {
    if (values[i] > out) {
      out = values[i];
      where = i;
    }
  }
  if (argmax) *argmax = where;
  return out;
}

}  // namespace loewner_lab::simd::avx2
