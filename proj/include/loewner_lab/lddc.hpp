#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "loewner_lab/descriptor.hpp"
#include "loewner_lab/freq_data.hpp"
#include "loewner_lab/loewner.hpp"

namespace loewner_lab {

/// Point at infinity in a constraint set; probed at i * kInfinityProbe.
inline const Complex kInfinity{std::numeric_limits<double>::infinity(), 0.0};
inline constexpr double kInfinityProbe = 1e6;

struct ReferenceModelSpec {
  TransferMap transfer;
  std::vector<Complex> zero_set;  // M(z) = 0 required
  std::vector<Complex> unit_set;  // M(p) = 1 required
};

/// 1 / (s^2/wn^2 + 2 s/wn + 1), with the constraints M(inf) = 0, M(0) = 1.
ReferenceModelSpec second_order_reference(double wn = 0.5);

/// Closed loop of `plant` with kp + ki/s, same constraint set.
ReferenceModelSpec pi_loop_reference(const TransferMap& plant, double kp, double ki);

struct ConstraintCheck {
  Complex point;    // kInfinity for the point at infinity
  Complex value;    // M at the point (or at the probe)
  double target;    // 0 or 1
  double residual;  // |value - target|
  bool pass;
};

struct AchievabilityReport {
  std::vector<ConstraintCheck> checks;
  bool achievable = true;
};

/// Residual tolerance 1e-6 absolute.
AchievabilityReport check_achievability(const ReferenceModelSpec& m_ref, double tol = 1e-6);

/// K*(z) = M(z) / (phi(z) (1 - M(z))) on the closed plant data. Throws
/// division-by-zero naming the frequency where phi = 0 or M = 1.
FrequencyDataset ideal_controller_response(const FrequencyDataset& plant_data,
                                           const ReferenceModelSpec& m_ref);

struct SmallGainBound {
  double gamma = 0.0;  // max |phi (1 - M)|
  double omega = 0.0;  // where it is attained
  bool vacuous = false;  // gamma == 0
  double inverse() const { return vacuous ? std::numeric_limits<double>::infinity() : 1.0 / gamma; }
};

SmallGainBound small_gain_bound(const FrequencyDataset& plant_data, const ReferenceModelSpec& m_ref);

/// Same bound from sampled M. Throws grid-mismatch unless both datasets have
/// the same points in the same order.
SmallGainBound small_gain_bound(const FrequencyDataset& plant_data,
                                const FrequencyDataset& m_data);

enum class ReductionVerdict { safe, inconclusive, failed };
std::string_view to_string(ReductionVerdict v);

struct ReductionRow {
  int order = 0;
  std::optional<DescriptorRealization> controller;
  double error = std::numeric_limits<double>::quiet_NaN();  // max |K_r - K*| on the data
  ReductionVerdict verdict = ReductionVerdict::failed;
  bool folded_feedthrough = false;
  std::string message;
};

struct ReductionSweep {
  std::vector<ReductionRow> rows;  // strictly increasing order
  SmallGainBound bound;
  std::optional<int> smallest_safe_order;
  double gamma_inverse() const { return bound.inverse(); }
};

struct ReductionOptions {
  /// A projected mode with |lambda| above this multiple of the largest data
  /// frequency encodes a feed-through and is folded into D.
  double far_mode_factor = 1e4;
  std::optional<SmallGainBound> bound;
};

/// Order-r controller fit (r = McMillan degree). The projection is tried at
/// dimension r + 1 first; a single far mode is folded into D.
DescriptorRealization fit_controller(const LoewnerModel& model, int r, double max_frequency,
                                     double far_mode_factor = 1e4, bool* folded = nullptr);

/// Rows run concurrently on one shared factorization. Without a bound every
/// row is inconclusive.
ReductionSweep reduce_controller(const FrequencyDataset& kstar_data, const std::vector<int>& orders,
                                 const ReductionOptions& options = {});

/// K(s) = D + c / (s - p) read off an order-1 realization.
struct FirstOrderForm {
  double feedthrough = 0.0;
  double residue = 0.0;
  double pole = 0.0;
  double kp() const { return feedthrough; }
  double ki() const { return residue; }
};
FirstOrderForm first_order_form(const DescriptorRealization& rlz);

}  // namespace loewner_lab
