#include "loewner_lab/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "loewner_lab/error.hpp"
#include "loewner_lab/parallel.hpp"
#include "loewner_lab/simd/kernels.hpp"

namespace loewner_lab {

namespace {

bool all_finite(const DescriptorRealization& r) {
  return r.E.allFinite() && r.A.allFinite() && r.B.allFinite() && r.C.allFinite() &&
         std::isfinite(r.D);
}

std::string format_point(Complex s) {
  std::ostringstream os;
  os.precision(17);
  os << s.real() << (s.imag() < 0 ? "-" : "+") << std::abs(s.imag()) << "i";
  return os.str();
}

}  // namespace

DescriptorRealization DescriptorRealization::gain(double d) {
  DescriptorRealization r;
  r.E.resize(0, 0);
  r.A.resize(0, 0);
  r.B.resize(0);
  r.C.resize(0);
  r.D = d;
  return r;
}

void DescriptorRealization::check_dimensions() const {
  const auto n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n || B.size() != n || C.size() != n) {
    throw Error(ErrorKind::argument, "realization dimensions are inconsistent");
  }
  if (!all_finite(*this)) {
    throw Error(ErrorKind::argument, "realization has non-finite entries");
  }
}

bool DescriptorRealization::is_regular() const {
  const auto n = order();
  if (n == 0) return true;
  const Complex probes[] = {{0.7, 1.3}, {-0.4, 2.9}, {1.9, 0.35}};
  for (Complex s : probes) {
    const CMatrix M = s * E.cast<Complex>() - A.cast<Complex>();
    if (Eigen::FullPivLU<CMatrix>(M).rank() == n) return true;
  }
  return false;
}

Complex eval_transfer(const DescriptorRealization& rlz, Complex s) {
  const auto n = rlz.order();
  if (n == 0) return rlz.D;
  const CMatrix M = s * rlz.E.cast<Complex>() - rlz.A.cast<Complex>();
  Eigen::PartialPivLU<CMatrix> lu(M);
  const CVector x = lu.solve(rlz.B.cast<Complex>());
  const Complex y = (rlz.C.cast<Complex>() * x)(0) + rlz.D;
  if (!std::isfinite(y.real()) || !std::isfinite(y.imag()) ||
      lu.rcond() < std::numeric_limits<double>::epsilon()) {
    throw Error(ErrorKind::pole_hit, "sE - A is singular at s = " + format_point(s));
  }
  return y;
}

std::vector<Complex> eval_transfer(const DescriptorRealization& rlz,
                                   std::span<const Complex> points) {
  std::vector<Complex> out(points.size());
  parallel_for(points.size(), [&](std::size_t k) { out[k] = eval_transfer(rlz, points[k]); });
  return out;
}

PoleSet poles(const DescriptorRealization& rlz) {
  PoleSet out;
  const auto n = rlz.order();
  if (n == 0) return out;
  Eigen::GeneralizedEigenSolver<Matrix> ges;
  ges.compute(rlz.A, rlz.E, false);
  if (ges.info() != Eigen::Success) {
    throw Error(ErrorKind::evaluation, "generalized eigenvalue solver did not converge");
  }
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex a = alphas(k);
    const double b = betas(k);
    if (std::abs(b) <= 1e-14 * std::abs(a) || b == 0.0) {
      ++out.infinite;
    } else {
      out.finite.push_back(a / b);
    }
  }
  std::sort(out.finite.begin(), out.finite.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

// ---------------------------------------------------------------- TransferMap

TransferMap::TransferMap(Function fn, std::string label,
                         std::optional<DescriptorRealization> realization)
    : fn_(std::make_shared<const Function>(std::move(fn))),
      label_(std::move(label)),
      realization_(std::move(realization)) {
  if (realization_) realization_->check_dimensions();
}

TransferMap TransferMap::from_realization(DescriptorRealization rlz, std::string label) {
  rlz.check_dimensions();
  auto shared = std::make_shared<const DescriptorRealization>(rlz);
  return TransferMap([shared](Complex s) { return eval_transfer(*shared, s); },
                     std::move(label), std::move(rlz));
}

TransferMap TransferMap::constant(Complex value) {
  std::optional<DescriptorRealization> rlz;
  if (value.imag() == 0.0) rlz = DescriptorRealization::gain(value.real());
  std::ostringstream label;
  label << value.real();
  if (value.imag() != 0.0) label << (value.imag() < 0 ? "-" : "+") << std::abs(value.imag()) << "i";
  return TransferMap([value](Complex) { return value; }, label.str(), std::move(rlz));
}

std::vector<Complex> TransferMap::evaluate(std::span<const Complex> points) const {
  std::vector<Complex> out(points.size());
  parallel_for(points.size(), [&](std::size_t k) { out[k] = (*fn_)(points[k]); });
  return out;
}

TransferMap series(const TransferMap& first, const TransferMap& second) {
  std::optional<DescriptorRealization> rlz;
  if (first.realization() && second.realization()) {
    rlz = series(*first.realization(), *second.realization());
  }
  return TransferMap([first, second](Complex s) { return first(s) * second(s); },
                     "(" + first.label() + ")*(" + second.label() + ")", std::move(rlz));
}

TransferMap sum(const TransferMap& a, const TransferMap& b) {
  std::optional<DescriptorRealization> rlz;
  if (a.realization() && b.realization()) {
    rlz = parallel_sum(*a.realization(), *b.realization());
  }
  return TransferMap([a, b](Complex s) { return a(s) + b(s); },
                     "(" + a.label() + ")+(" + b.label() + ")", std::move(rlz));
}

TransferMap affine(const TransferMap& h, Complex a, Complex b) {
  std::optional<DescriptorRealization> rlz;
  if (h.realization() && a.imag() == 0.0 && b.imag() == 0.0) {
    rlz = *h.realization();
    rlz->C *= a.real();
    rlz->D = a.real() * rlz->D + b.real();
  }
  std::ostringstream label;
  label << a.real() << "*(" << h.label() << ")+" << b.real();
  return TransferMap([h, a, b](Complex s) { return a * h(s) + b; }, label.str(), std::move(rlz));
}

TransferMap scale(const TransferMap& h, double factor) { return affine(h, factor, 0.0); }

TransferMap inverse(const TransferMap& h) {
  std::optional<DescriptorRealization> rlz;
  if (h.realization() && h.realization()->D != 0.0) {
    const DescriptorRealization& r = *h.realization();
    DescriptorRealization inv;
    inv.E = r.E;
    inv.A = r.A - r.B * r.C / r.D;
    inv.B = r.B / r.D;
    inv.C = -r.C / r.D;
    inv.D = 1.0 / r.D;
    rlz = std::move(inv);
  }
  return TransferMap(
      [h](Complex s) {
        const Complex v = h(s);
        if (v == Complex(0.0, 0.0)) {
          throw Error(ErrorKind::division_by_zero, "inverse of zero at s = " + format_point(s));
        }
        return 1.0 / v;
      },
      "1/(" + h.label() + ")", std::move(rlz));
}

TransferMap delay(double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorKind::argument, "delay must be non-negative");
  std::optional<DescriptorRealization> rlz;
  if (tau == 0.0) rlz = DescriptorRealization::gain(1.0);
  std::ostringstream label;
  label << "exp(-" << tau << "s)";
  return TransferMap([tau](Complex s) { return std::exp(-tau * s); }, label.str(),
                     std::move(rlz));
}

TransferMap feedback(const TransferMap& loop) {
  std::optional<DescriptorRealization> rlz;
  if (loop.realization() && loop.realization()->D != -1.0) {
    rlz = unity_feedback(*loop.realization());
    // The realization avoids evaluating the loop at its own poles.
    return TransferMap::from_realization(std::move(*rlz), "fb(" + loop.label() + ")");
  }
  return TransferMap(
      [loop](Complex s) {
        const Complex l = loop(s);
        const Complex den = 1.0 + l;
        if (std::abs(den) <= std::numeric_limits<double>::min()) {
          throw Error(ErrorKind::loop_singularity, "1 + L vanishes at s = " + format_point(s));
        }
        return l / den;
      },
      "fb(" + loop.label() + ")", std::move(rlz));
}

TransferMap closed_loop_delay(const TransferMap& h, const TransferMap& k, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorKind::argument, "delay must be non-negative");
  std::optional<DescriptorRealization> rlz;
  if (tau == 0.0 && h.realization() && k.realization()) {
    DescriptorRealization loop = series(*h.realization(), *k.realization());
    if (loop.D != -1.0) rlz = unity_feedback(loop);
  }
  std::ostringstream label;
  label << "cl(" << h.label() << ", " << k.label() << ", tau=" << tau << ")";
  return TransferMap(
      [h, k, tau](Complex s) {
        const Complex hk = h(s) * k(s);
        const Complex den = 1.0 + hk * std::exp(-tau * s);
        if (std::abs(den) <= std::numeric_limits<double>::min()) {
          throw Error(ErrorKind::loop_singularity,
                      "1 + HK e^{-tau s} vanishes at s = " + format_point(s));
        }
        return hk / den;
      },
      label.str(), std::move(rlz));
}

// ------------------------------------------------------- realization algebra

DescriptorRealization series(const DescriptorRealization& first,
                             const DescriptorRealization& second) {
  // u -> second -> first -> y
  const auto n1 = first.order();
  const auto n2 = second.order();
  DescriptorRealization r;
  r.E = Matrix::Zero(n1 + n2, n1 + n2);
  r.A = Matrix::Zero(n1 + n2, n1 + n2);
  r.E.topLeftCorner(n1, n1) = first.E;
  r.E.bottomRightCorner(n2, n2) = second.E;
  r.A.topLeftCorner(n1, n1) = first.A;
  r.A.topRightCorner(n1, n2) = first.B * second.C;
  r.A.bottomRightCorner(n2, n2) = second.A;
  r.B.resize(n1 + n2);
  r.B << first.B * second.D, second.B;
  r.C.resize(n1 + n2);
  r.C << first.C, first.D * second.C;
  r.D = first.D * second.D;
  return r;
}

DescriptorRealization parallel_sum(const DescriptorRealization& a,
                                   const DescriptorRealization& b) {
  const auto na = a.order();
  const auto nb = b.order();
  DescriptorRealization r;
  r.E = Matrix::Zero(na + nb, na + nb);
  r.A = Matrix::Zero(na + nb, na + nb);
  r.E.topLeftCorner(na, na) = a.E;
  r.E.bottomRightCorner(nb, nb) = b.E;
  r.A.topLeftCorner(na, na) = a.A;
  r.A.bottomRightCorner(nb, nb) = b.A;
  r.B.resize(na + nb);
  r.B << a.B, b.B;
  r.C.resize(na + nb);
  r.C << a.C, b.C;
  r.D = a.D + b.D;
  return r;
}

DescriptorRealization unity_feedback(const DescriptorRealization& loop) {
  const double den = 1.0 + loop.D;
  if (den == 0.0) {
    throw Error(ErrorKind::loop_singularity, "feedback with 1 + D = 0 is ill-posed");
  }
  DescriptorRealization r;
  r.E = loop.E;
  r.A = loop.A - loop.B * loop.C / den;
  r.B = loop.B / den;
  r.C = loop.C / den;
  r.D = loop.D / den;
  return r;
}

DescriptorRealization pi_realization(double kp, double ki) {
  DescriptorRealization r;
  r.E = Matrix::Ones(1, 1);
  r.A = Matrix::Zero(1, 1);
  r.B = Vector::Ones(1);
  r.C = RowVector::Constant(1, ki);
  r.D = kp;
  return r;
}

// ------------------------------------------------------------------ grid norm

GridMax linf_norm_grid(const TransferMap& h, std::span<const double> omegas) {
  if (omegas.empty()) throw Error(ErrorKind::argument, "empty frequency grid");
  std::vector<Complex> values(omegas.size());
  parallel_for(omegas.size(), [&](std::size_t k) {
    try {
      values[k] = h(Complex(0.0, omegas[k]));
    } catch (const Error& e) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "evaluation failed at omega = " << omegas[k] << ": " << e.what();
      throw Error(ErrorKind::evaluation, msg.str());
    }
  });
  std::size_t at = 0;
  const double value = simd::max_abs(values, &at);
  return {value, omegas[at]};
}

std::vector<double> densify_log_grid(std::span<const double> omegas, int factor) {
  if (factor < 1) throw Error(ErrorKind::argument, "densification factor must be >= 1");
  if (omegas.size() < 2 || factor == 1) return {omegas.begin(), omegas.end()};
  std::vector<double> out;
  out.reserve((omegas.size() - 1) * static_cast<std::size_t>(factor) + 1);
  for (std::size_t k = 0; k + 1 < omegas.size(); ++k) {
    if (!(omegas[k] > 0.0) || !(omegas[k + 1] > omegas[k])) {
      throw Error(ErrorKind::argument, "log densification needs positive increasing grid");
    }
    const double a = std::log(omegas[k]);
    const double b = std::log(omegas[k + 1]);
    out.push_back(omegas[k]);
    for (int j = 1; j < factor; ++j) out.push_back(std::exp(a + (b - a) * j / factor));
  }
  out.push_back(omegas.back());
  return out;
}

// ----------------------------------------------------------------- simulation

TimeSeries simulate_step(const DescriptorRealization& rlz, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorKind::argument, "simulation needs dt > 0 and t_end > 0");
  }
  rlz.check_dimensions();
  const auto n = rlz.order();
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  TimeSeries ts;
  ts.t.reserve(steps + 1);
  ts.y.reserve(steps + 1);
  if (n == 0) {
    for (std::size_t k = 0; k <= steps; ++k) {
      ts.t.push_back(std::min(t_end, static_cast<double>(k) * dt));
      ts.y.push_back(rlz.D);
    }
    return ts;
  }
  Eigen::FullPivLU<Matrix> e_lu(rlz.E);
  if (!e_lu.isInvertible()) {
    throw Error(ErrorKind::singular_pencil, "simulation needs an invertible E");
  }
  for (Complex p : poles(rlz).finite) {
    // A mode that decays by less than 1% over the window acts as an integrator.
    if (std::abs(p) * t_end < 1e-2) {
      ts.warnings.push_back("pole at the origin: the step response does not settle");
    } else if (p.real() >= 0.0) {
      ts.warnings.push_back("unstable pole: the step response diverges");
    }
  }
  std::sort(ts.warnings.begin(), ts.warnings.end());
  ts.warnings.erase(std::unique(ts.warnings.begin(), ts.warnings.end()), ts.warnings.end());

  const Matrix lhs = rlz.E - 0.5 * dt * rlz.A;
  const Matrix rhs = rlz.E + 0.5 * dt * rlz.A;
  Eigen::PartialPivLU<Matrix> step_lu(lhs);
  const Vector forcing = dt * rlz.B;  // u = 1 at both ends of the step
  Vector x = Vector::Zero(n);
  ts.t.push_back(0.0);
  ts.y.push_back(rlz.D);
  for (std::size_t k = 1; k <= steps; ++k) {
    x = step_lu.solve(rhs * x + forcing);
    ts.t.push_back(std::min(t_end, static_cast<double>(k) * dt));
    ts.y.push_back(rlz.C.dot(x) + rlz.D);
  }
  return ts;
}

}  // namespace loewner_lab
