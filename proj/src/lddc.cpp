#include "loewner_lab/lddc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "loewner_lab/error.hpp"
#include "loewner_lab/parallel.hpp"

namespace loewner_lab {

namespace {

std::string omega_text(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.imag();
  return os.str();
}

double max_frequency(const FrequencyDataset& d) {
  double out = 0.0;
  for (const auto& s : d.samples()) out = std::max(out, std::abs(s.z));
  return out;
}

// Removes a single index-1 infinite mode: rotate E to diag(S, 0) and solve the
// algebraic row for the last state, which leaves a constant in D.
DescriptorRealization eliminate_infinite_mode(const DescriptorRealization& rlz) {
  const Eigen::JacobiSVD<Matrix> svd(rlz.E, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index n = rlz.order();
  const Eigen::Index r = n - 1;
  const Matrix& U = svd.matrixU();
  const Matrix& V = svd.matrixV();
  const Matrix At = U.transpose() * rlz.A * V;
  const Vector Bt = U.transpose() * rlz.B;
  const RowVector Ct = rlz.C * V;
  const double a22 = At(r, r);
  if (std::abs(a22) <= 1e-14 * At.norm()) {
    throw Error(ErrorKind::singular_pencil, "infinite mode is not index one");
  }
  DescriptorRealization out;
  out.E = svd.singularValues().head(r).asDiagonal();
  out.A = At.topLeftCorner(r, r) - At.col(r).head(r) * At.row(r).head(r) / a22;
  out.B = Bt.head(r) - At.col(r).head(r) * (Bt(r) / a22);
  out.C = Ct.head(r) - Ct(r) * At.row(r).head(r) / a22;
  out.D = rlz.D - Ct(r) * Bt(r) / a22;
  return out;
}

}  // namespace

std::string_view to_string(ReductionVerdict v) {
  switch (v) {
    case ReductionVerdict::safe: return "stabilizing";
    case ReductionVerdict::inconclusive: return "inconclusive";
    case ReductionVerdict::failed: return "failed";
  }
  return "failed";
}

ReferenceModelSpec second_order_reference(double wn) {
  if (!(wn > 0.0)) throw Error(ErrorKind::argument, "reference bandwidth must be positive");
  // x1' = x2, x2' = -wn^2 x1 - 2 wn x2 + wn^2 u, y = x1
  DescriptorRealization r;
  r.E = Matrix::Identity(2, 2);
  r.A.resize(2, 2);
  r.A << 0.0, 1.0, -wn * wn, -2.0 * wn;
  r.B.resize(2);
  r.B << 0.0, wn * wn;
  r.C.resize(2);
  r.C << 1.0, 0.0;
  r.D = 0.0;
  std::ostringstream label;
  label << "1/(s^2/" << wn * wn << "+2s/" << wn << "+1)";
  TransferMap m(
      [wn](Complex s) { return 1.0 / (s * s / (wn * wn) + 2.0 * s / wn + 1.0); }, label.str(),
      std::move(r));
  return {m, {kInfinity}, {Complex(0.0, 0.0)}};
}

ReferenceModelSpec pi_loop_reference(const TransferMap& plant, double kp, double ki) {
  const TransferMap pi = TransferMap::from_realization(pi_realization(kp, ki), "pi");
  return {feedback(series(plant, pi)), {kInfinity}, {Complex(0.0, 0.0)}};
}

AchievabilityReport check_achievability(const ReferenceModelSpec& m_ref, double tol) {
  AchievabilityReport rep;
  auto check = [&](Complex point, double target) {
    const Complex probe = std::isinf(point.real()) ? Complex(0.0, kInfinityProbe) : point;
    ConstraintCheck c{point, 0.0, target, 0.0, false};
    try {
      c.value = m_ref.transfer(probe);
    } catch (const Error& e) {
      throw Error(ErrorKind::evaluation,
                  std::string("reference model evaluation failed at a constraint point: ") +
                      e.what());
    }
    c.residual = std::abs(c.value - target);
    c.pass = c.residual <= tol;
    rep.achievable = rep.achievable && c.pass;
    rep.checks.push_back(c);
  };
  for (Complex z : m_ref.zero_set) check(z, 0.0);
  for (Complex p : m_ref.unit_set) check(p, 1.0);
  return rep;
}

FrequencyDataset ideal_controller_response(const FrequencyDataset& plant_data,
                                           const ReferenceModelSpec& m_ref) {
  const FrequencyDataset closed =
      plant_data.conjugate_closed() ? plant_data : close_conjugate(plant_data);
  const std::vector<Complex> pts = closed.points();
  const std::vector<Complex> mvals = m_ref.transfer.evaluate(pts);
  std::vector<FrequencySample> out;
  out.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Complex phi = closed.samples()[k].phi;
    const Complex one_minus = 1.0 - mvals[k];
    if (phi == Complex(0.0, 0.0)) {
      throw Error(ErrorKind::division_by_zero,
                  "plant response is zero at omega = " + omega_text(pts[k]));
    }
    if (std::abs(one_minus) <= 1e-14) {
      throw Error(ErrorKind::division_by_zero,
                  "reference model equals 1 at omega = " + omega_text(pts[k]));
    }
    out.push_back({pts[k], mvals[k] / (phi * one_minus)});
  }
  return FrequencyDataset(std::move(out), true);
}

SmallGainBound small_gain_bound(const FrequencyDataset& plant_data,
                                const ReferenceModelSpec& m_ref) {
  const std::vector<Complex> pts = plant_data.points();
  const std::vector<Complex> mvals = m_ref.transfer.evaluate(pts);
  std::vector<FrequencySample> m;
  m.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) m.push_back({pts[k], mvals[k]});
  return small_gain_bound(plant_data, FrequencyDataset(std::move(m)));
}

SmallGainBound small_gain_bound(const FrequencyDataset& plant_data,
                                const FrequencyDataset& m_data) {
  if (plant_data.size() != m_data.size()) {
    throw Error(ErrorKind::grid_mismatch, "plant and reference grids differ in length");
  }
  SmallGainBound b;
  for (std::size_t k = 0; k < plant_data.size(); ++k) {
    const auto& p = plant_data.samples()[k];
    const auto& m = m_data.samples()[k];
    if (p.z != m.z) {
      throw Error(ErrorKind::grid_mismatch,
                  "plant and reference grids differ at index " + std::to_string(k));
    }
    const double g = std::abs(p.phi * (1.0 - m.phi));
    if (g > b.gamma) {
      b.gamma = g;
      b.omega = p.z.imag();
    }
  }
  b.vacuous = b.gamma == 0.0;
  return b;
}

DescriptorRealization fit_controller(const LoewnerModel& model, int r, double max_frequency,
                                     double far_mode_factor, bool* folded) {
  if (folded) *folded = false;
  if (r + 1 <= model.size()) {
    try {
      const DescriptorRealization wide = model.realization(r + 1);
      const PoleSet ps = poles(wide);
      const double threshold = far_mode_factor * max_frequency;
      const auto far = std::count_if(ps.finite.begin(), ps.finite.end(),
                                     [&](Complex p) { return std::abs(p) > threshold; });
      if (far == 1 && ps.infinite == 0) {
        SpectralParts parts =
            spectral_split(wide, [&](Complex p) { return std::abs(p) > threshold; });
        DescriptorRealization near = std::move(parts.rest);
        near.D += eval_transfer(parts.selected, Complex(0.0, 0.0)).real();
        if (folded) *folded = true;
        return near;
      }
      if (far == 0 && ps.infinite == 1) {
        DescriptorRealization near = eliminate_infinite_mode(wide);
        if (folded) *folded = true;
        return near;
      }
    } catch (const Error&) {
      // fall through to the plain projection
    }
  }
  return model.realization(r);
}

ReductionSweep reduce_controller(const FrequencyDataset& kstar_data, const std::vector<int>& orders,
                                 const ReductionOptions& options) {
  for (std::size_t k = 1; k < orders.size(); ++k) {
    if (orders[k] <= orders[k - 1]) {
      throw Error(ErrorKind::argument, "orders must be strictly increasing");
    }
  }
  const FrequencyDataset data =
      kstar_data.conjugate_closed() ? kstar_data : close_conjugate(kstar_data);
  if (!orders.empty() && static_cast<int>(data.size()) < 2 * orders.back()) {
    throw Error(ErrorKind::argument, "not enough samples for the requested orders");
  }
  const LoewnerModel model(pencil_from_data(data), false);
  const double wmax = max_frequency(data);
  const std::vector<Complex> pts = data.points();

  ReductionSweep sweep;
  if (options.bound) sweep.bound = *options.bound;
  sweep.rows.resize(orders.size());
  parallel_for(orders.size(), [&](std::size_t k) {
    ReductionRow& row = sweep.rows[k];
    row.order = orders[k];
    try {
      bool folded = false;
      DescriptorRealization ctrl =
          fit_controller(model, orders[k], wmax, options.far_mode_factor, &folded);
      double err = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        err = std::max(err, std::abs(eval_transfer(ctrl, pts[i]) - data.samples()[i].phi));
      }
      row.error = err;
      row.folded_feedthrough = folded;
      row.controller = std::move(ctrl);
      row.verdict = options.bound && err < options.bound->inverse()
                        ? ReductionVerdict::safe
                        : ReductionVerdict::inconclusive;
    } catch (const Error& e) {
      row.verdict = ReductionVerdict::failed;
      row.message = e.what();
    }
  });

  // Smallest r such that every swept order >= r is marked safe.
  for (std::size_t k = sweep.rows.size(); k-- > 0;) {
    if (sweep.rows[k].verdict != ReductionVerdict::safe) break;
    sweep.smallest_safe_order = sweep.rows[k].order;
  }
  return sweep;
}

FirstOrderForm first_order_form(const DescriptorRealization& rlz) {
  if (rlz.order() != 1) throw Error(ErrorKind::argument, "expected an order-1 realization");
  const double e = rlz.E(0, 0);
  if (e == 0.0) throw Error(ErrorKind::singular_pencil, "order-1 realization has E = 0");
  FirstOrderForm f;
  f.feedthrough = rlz.D;
  f.pole = rlz.A(0, 0) / e;
  f.residue = rlz.C(0) * rlz.B(0) / e;
  return f;
}

}  // namespace loewner_lab
