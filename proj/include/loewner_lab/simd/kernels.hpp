#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86-64
// builds, an AVX2/FMA variant; the entry points in namespace `simd` pick one
// at runtime. Set LOEWNER_LAB_SIMD=scalar to pin the reference path.

#include <cstddef>
#include <span>
#include <string_view>

#include "loewner_lab/types.hpp"

namespace loewner_lab::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// ISA used by the dispatching entry points.
Isa active_isa();

/// True when the AVX2 variant is compiled in and the CPU supports it.
bool avx2_available();

/// Overrides the dispatch choice (tests and benchmarks). Requesting avx2 on a
/// machine without it falls back to scalar.
void set_isa(Isa isa);

/// Fills column-major m x n matrices
///   loewner(i, j) = (v_i - w_j) / (mu_i - lambda_j)
///   shifted(i, j) = (mu_i v_i - lambda_j w_j) / (mu_i - lambda_j)
/// with leading dimension ld >= m. Caller guarantees mu_i != lambda_j.
struct LoewnerFillArgs {
  std::span<const Complex> mu;
  std::span<const Complex> v;
  std::span<const Complex> lambda;
  std::span<const Complex> w;
  Complex* loewner = nullptr;
  Complex* shifted = nullptr;
  std::ptrdiff_t ld = 0;
};

void loewner_fill(const LoewnerFillArgs& args);

/// Largest modulus in `values`; writes its index to `argmax` when non-null.
/// Returns 0 (argmax 0) for an empty span.
double max_abs(std::span<const Complex> values, std::size_t* argmax = nullptr);

/// Largest entry of a real span with its index; -inf for an empty span.
double max_value(std::span<const double> values, std::size_t* argmax = nullptr);

namespace scalar {
void loewner_fill(const LoewnerFillArgs& args);
double max_abs(std::span<const Complex> values, std::size_t* argmax);
double max_value(std::span<const double> values, std::size_t* argmax);
}  // namespace scalar

#if defined(LOEWNER_LAB_WITH_AVX2)
namespace avx2 {
void loewner_fill(const LoewnerFillArgs& args);
double max_abs(std::span<const Complex> values, std::size_t* argmax);
double max_value(std::span<const double> values, std::size_t* argmax);
}  // namespace avx2
#endif

}  // namespace loewner_lab::simd
