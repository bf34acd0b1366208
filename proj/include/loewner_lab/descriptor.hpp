#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loewner_lab/types.hpp"

namespace loewner_lab {

/// SISO descriptor system E x' = A x + B u, y = C x + D u.
struct DescriptorRealization {
  Matrix E;
  Matrix A;
  Vector B;
  RowVector C;
  double D = 0.0;

  Eigen::Index order() const { return A.rows(); }

  /// Static gain y = D u (order 0).
  static DescriptorRealization gain(double d);

  /// Throws argument error on inconsistent dimensions or non-finite entries.
  void check_dimensions() const;

  /// Probes det(sE - A) at three fixed points off the real axis.
  bool is_regular() const;
};

/// Transfer value C (sE - A)^{-1} B + D via an LU solve. Throws pole-hit
/// when sE - A is numerically singular at s.
Complex eval_transfer(const DescriptorRealization& rlz, Complex s);

/// Batched evaluation, parallel over points.
std::vector<Complex> eval_transfer(const DescriptorRealization& rlz,
                                   std::span<const Complex> points);

struct PoleSet {
  std::vector<Complex> finite;  // sorted by real part, then imaginary part
  int infinite = 0;
};

/// Generalized eigenvalues of (A, E). Eigenvalues with |beta| <= 1e-14 |alpha|
/// are counted as infinite.
PoleSet poles(const DescriptorRealization& rlz);

/// Evaluator s -> value with an optional realization when it is rational.
/// Cheap to copy (the closure is shared).
class TransferMap {
 public:
  using Function = std::function<Complex(Complex)>;

  TransferMap(Function fn, std::string label,
              std::optional<DescriptorRealization> realization = std::nullopt);

  static TransferMap from_realization(DescriptorRealization rlz, std::string label);
  static TransferMap constant(Complex value);

  Complex operator()(Complex s) const { return (*fn_)(s); }

  /// Evaluates at every point (parallel).
  std::vector<Complex> evaluate(std::span<const Complex> points) const;

  const std::string& label() const { return label_; }
  const std::optional<DescriptorRealization>& realization() const { return realization_; }

 private:
  std::shared_ptr<const Function> fn_;
  std::string label_;
  std::optional<DescriptorRealization> realization_;
};

// Composition. A result carries a realization only when every operand does
// and the operation stays rational.
TransferMap series(const TransferMap& first, const TransferMap& second);
TransferMap sum(const TransferMap& a, const TransferMap& b);
TransferMap scale(const TransferMap& h, double factor);
TransferMap affine(const TransferMap& h, Complex a, Complex b);  // a*h + b
TransferMap inverse(const TransferMap& h);
TransferMap delay(double tau);
/// Unity negative feedback around `loop`: L / (1 + L).
TransferMap feedback(const TransferMap& loop);

/// s -> h k / (1 + h k e^{-tau s}). Throws loop-singularity where the
/// denominator vanishes.
TransferMap closed_loop_delay(const TransferMap& h, const TransferMap& k, double tau);

// Realization-level interconnections.
DescriptorRealization series(const DescriptorRealization& first,
                             const DescriptorRealization& second);
DescriptorRealization parallel_sum(const DescriptorRealization& a,
                                   const DescriptorRealization& b);
DescriptorRealization unity_feedback(const DescriptorRealization& loop);
DescriptorRealization pi_realization(double kp, double ki);

struct GridMax {
  double value = 0.0;
  double omega = 0.0;
};

/// max_k |h(i omega_k)| with its argmax. Evaluation failures are rethrown as
/// evaluation errors naming omega.
GridMax linf_norm_grid(const TransferMap& h, std::span<const double> omegas);

/// Inserts factor-1 log-spaced points between consecutive grid values.
std::vector<double> densify_log_grid(std::span<const double> omegas, int factor);

struct StableSplit {
  DescriptorRealization stable_part;      // Re(lambda) < 0, carries D
  DescriptorRealization antistable_part;  // Re(lambda) >= 0
};

inline constexpr double kImagAxisGuard = 1e-8;

/// Additive decomposition H = H_selected + H_rest by spectral projection. E
/// must be invertible. D goes to `rest`.
struct SpectralParts {
  DescriptorRealization selected;
  DescriptorRealization rest;
};
SpectralParts spectral_split(const DescriptorRealization& rlz,
                             const std::function<bool(Complex)>& select);

/// Stable/antistable split. Throws boundary-pole when a pole lies within
/// kImagAxisGuard of the imaginary axis, singular-pencil when E is singular.
StableSplit stable_antistable_split(const DescriptorRealization& rlz);

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<std::string> warnings;
};

/// Unit-step response by trapezoidal integration from a zero state. Warns on
/// unstable poles and on poles with |p| t_end < 0.01 (no settling in the window).
TimeSeries simulate_step(const DescriptorRealization& rlz, double t_end, double dt);

}  // namespace loewner_lab
