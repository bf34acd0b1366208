#pragma once

#include <vector>

#include "loewner_lab/descriptor.hpp"
#include "loewner_lab/types.hpp"

namespace loewner_lab {

/// Transport line on [0, L] driven through a second-order actuator.
struct PlantParameters {
  double length = 3.0;
  double omega0 = 3.0;
  double damping = 0.5;
  int n_x = 50;
  /// 33rd point of the 50-point uniform grid on [0, 3], i.e. 96/49.
  double x_m = 96.0 / 49.0;

  void validate() const;
};

/// omega0^2 / (s^2 + m omega0 s + omega0^2).
Complex eval_actuator(const PlantParameters& p, Complex s);

/// sqrt(pi)/sqrt(s) * exp(-x^2 s) * actuator(s), principal square root.
Complex eval_plant(const PlantParameters& p, double x, Complex s);

/// n log-spaced frequencies (rad/s), strictly increasing, exact endpoints.
std::vector<double> log_frequencies(int n, double w_min, double w_max);

/// The same frequencies as points i*omega.
std::vector<Complex> sample_grid(int n, double w_min, double w_max);

/// eval_plant at the measurement point x_m.
TransferMap plant_transfer(const PlantParameters& p = {});

}  // namespace loewner_lab
