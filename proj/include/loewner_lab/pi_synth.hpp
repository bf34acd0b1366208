#pragma once

#include <span>
#include <vector>

#include "loewner_lab/descriptor.hpp"

namespace loewner_lab {

struct PIController {
  double kp = 0.0;
  double ki = 0.0;

  Complex operator()(Complex s) const { return kp + ki / s; }
  DescriptorRealization realization() const { return pi_realization(kp, ki); }
  TransferMap transfer() const;
};

struct WeightingFilters {
  TransferMap We;
  TransferMap Wu;

  /// We = 10 (s + 1) / s, Wu = (s + 10) / (s + 1000).
  static WeightingFilters standard();
};

struct WeightedPerformance {
  double gamma = 0.0;
  double omega = 0.0;  // frequency of the peak
};

/// max over the grid of |(We S, Wu K S)|_2 with S = 1 / (1 + H K). The grid
/// must not contain omega = 0. Throws loop-singularity when 1 + H K vanishes.
WeightedPerformance eval_weighted_performance(const TransferMap& plant, const PIController& k,
                                              const WeightingFilters& w,
                                              std::span<const double> omegas);

struct PiSynthesisOptions {
  double lower = 1e-3;  // box on both gains
  double upper = 10.0;
  int kp_starts = 5;
  int ki_starts = 4;
  int max_iterations = 4000;
  double x_tol = 1e-9;  // simplex size in log10 units
  double f_tol = 1e-12;  // relative spread of objective values
  /// Reject gains whose closed loop on the plant realization (when present)
  /// has a pole with Re >= 0.
  bool require_stable = true;
};

struct PiSynthesisResult {
  PIController controller;
  double gamma = 0.0;
  double gamma_omega = 0.0;
  double start_gamma = 0.0;
  /// A-posteriori check on the plant realization; empty when none exists.
  std::optional<bool> closed_loop_stable;
  std::vector<Complex> closed_loop_poles;
  int evaluations = 0;
};

/// Multi-start Nelder-Mead in log10(kp), log10(ki) over the option box:
/// kp_starts x ki_starts log-spaced seeds plus `start`. Throws infeasible
/// when no seed has a finite objective.
PiSynthesisResult optimize_pi(const TransferMap& plant, const WeightingFilters& w,
                              std::span<const double> omegas, const PIController& start,
                              const PiSynthesisOptions& options = {});

/// Closed-loop poles of plant * k under unity feedback.
std::vector<Complex> closed_loop_poles(const DescriptorRealization& plant, const PIController& k);

struct LoopResponse {
  std::vector<double> omega;
  std::vector<Complex> sensitivity;            // 1 / (1 + H K)
  std::vector<Complex> complementary;          // H K / (1 + H K)
};

LoopResponse loop_response(const TransferMap& plant, const PIController& k,
                           std::span<const double> omegas);

}  // namespace loewner_lab
