#include <atomic>
#include <cstdlib>
#include <string>

#include "loewner_lab/simd/kernels.hpp"

namespace loewner_lab::simd {
namespace {

bool cpu_has_avx2() {
#if defined(LOEWNER_LAB_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("LOEWNER_LAB_SIMD")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool avx2_available() {
  static const bool available = cpu_has_avx2();
  return available;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
}

void loewner_fill(const LoewnerFillArgs& args) {
#if defined(LOEWNER_LAB_WITH_AVX2)
  if (active_isa() == Isa::avx2) return avx2::loewner_fill(args);
#endif
  scalar::loewner_fill(args);
}

double max_abs(std::span<const Complex> values, std::size_t* argmax) {
#if defined(LOEWNER_LAB_WITH_AVX2)
  if (active_isa() == Isa::avx2) return avx2::max_abs(values, argmax);
#endif
  return scalar::max_abs(values, argmax);
}

double max_value(std::span<const double> values, std::size_t* argmax) {
#if defined(LOEWNER_LAB_WITH_AVX2)
  if (active_isa() == Isa::avx2) return avx2::max_value(values, argmax);
#endif
  return scalar::max_value(values, argmax);
}

}  // namespace loewner_lab::simd
