#include "loewner_lab/plant.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "loewner_lab/error.hpp"

namespace loewner_lab {

void PlantParameters::validate() const {
  if (!(length > 0.0) || !(omega0 > 0.0) || !(damping > 0.0) || n_x < 2 ||
      !(x_m >= 0.0 && x_m <= length)) {
    throw Error(ErrorKind::argument,
                "plant parameters require L > 0, omega0 > 0, m > 0, n_x >= 2, 0 <= x_m <= L");
  }
}

Complex eval_actuator(const PlantParameters& p, Complex s) {
  const double w2 = p.omega0 * p.omega0;
  const Complex den = s * s + p.damping * p.omega0 * s + w2;
  const double scale = std::norm(s) + p.damping * p.omega0 * std::abs(s) + w2;
  if (std::abs(den) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
    std::ostringstream msg;
    msg << "actuator pole hit at s = " << s;
    throw Error(ErrorKind::pole_hit, msg.str());
  }
  return w2 / den;
}

Complex eval_plant(const PlantParameters& p, double x, Complex s) {
  if (s == Complex(0.0, 0.0)) {
    throw Error(ErrorKind::singularity, "plant is singular at s = 0");
  }
  if (!(x >= 0.0 && x <= p.length)) {
    throw Error(ErrorKind::argument, "space coordinate outside [0, L]");
  }
  const Complex transport = std::sqrt(std::numbers::pi) / std::sqrt(s) * std::exp(-x * x * s);
  return transport * eval_actuator(p, s);
}

std::vector<double> log_frequencies(int n, double w_min, double w_max) {
  if (n < 2 || !(w_min > 0.0) || !(w_max > w_min) || !std::isfinite(w_max)) {
    throw Error(ErrorKind::argument, "frequency grid needs n >= 2 and 0 < w_min < w_max");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log10(w_min);
  const double b = std::log10(w_max);
  for (int k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * k / (n - 1));
  }
  out.front() = w_min;
  out.back() = w_max;
  return out;
}

std::vector<Complex> sample_grid(int n, double w_min, double w_max) {
  std::vector<Complex> out;
  for (double w : log_frequencies(n, w_min, w_max)) out.emplace_back(0.0, w);
  return out;
}

TransferMap plant_transfer(const PlantParameters& p) {
  p.validate();
  return TransferMap([p](Complex s) { return eval_plant(p, p.x_m, s); }, "plant");
}

}  // namespace loewner_lab
