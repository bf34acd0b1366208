#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loewner_lab/descriptor.hpp"

namespace loewner_lab {

enum class Verdict { stable, unstable, inconclusive };
std::string_view to_string(Verdict v);

struct MfsaOptions {
  double epsilon = 1e-10;   // verdict threshold on the tag
  double svd_tol = 1e-10;   // rank detection of the interpolant
  int norm_densify = 5;     // grid refinement for the gap norm
  /// Count an antistable mode only when interpolants of the even- and
  /// odd-indexed halves of the samples reproduce it.
  bool cross_validate = true;
  double match_rel = 1e-6;  // pole agreement: |p - q| <= match_rel |p| + match_abs
  double match_abs = 1e-9;
};

struct StabilityReport {
  double stab_tag = 0.0;  // gap norm of the confirmed antistable part
  double raw_tag = 0.0;   // same, counting every antistable mode
  double epsilon = 0.0;
  Verdict verdict = Verdict::stable;
  int order = 0;             // detected interpolant order
  double argmax_omega = 0.0;  // where the gap peaks
  std::vector<Complex> antistable_poles;  // confirmed ones
  std::vector<Complex> rejected_poles;    // antistable but not reproduced
  std::string message;
};

/// Samples h on the grid, interpolates at the detected rank, splits off the
/// antistable part and measures its grid L-infinity norm.
StabilityReport stability_tag(const TransferMap& h, std::span<const double> omegas,
                              const MfsaOptions& options = {});

struct DelaySweepRow {
  double tau = 0.0;
  StabilityReport report;
};

struct DelaySweepResult {
  std::vector<DelaySweepRow> rows;  // ascending tau
  std::optional<double> first_unstable_tau;
  std::optional<double> refined_tau;  // bisection estimate when requested
};

struct DelaySweepOptions {
  MfsaOptions mfsa;
  int delay_densify = 4;  // grid refinement for tau > 0
  int refine_steps = 0;   // bisection steps between last stable and first unstable
};

/// Rows run concurrently; a row that throws is recorded as inconclusive.
DelaySweepResult delay_margin_sweep(const TransferMap& plant, const TransferMap& k,
                                    std::span<const double> taus, std::span<const double> omegas,
                                    const DelaySweepOptions& options = {});

/// L(i w) e^{-i w tau} with L = plant * k.
std::vector<Complex> nyquist_curve(const TransferMap& plant, const TransferMap& k, double tau,
                                   std::span<const double> omegas);

/// n equally spaced values from a to b inclusive.
std::vector<double> linspace(double a, double b, int n);

}  // namespace loewner_lab
