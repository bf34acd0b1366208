#include "loewner_lab/pi_synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "loewner_lab/error.hpp"
#include "loewner_lab/parallel.hpp"
#include "loewner_lab/simd/kernels.hpp"

namespace loewner_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Complex> axis_points(std::span<const double> omegas) {
  std::vector<Complex> pts;
  pts.reserve(omegas.size());
  for (double w : omegas) {
    if (!(w > 0.0)) throw Error(ErrorKind::argument, "performance grid must exclude omega <= 0");
    pts.emplace_back(0.0, w);
  }
  return pts;
}

// Plant and weights sampled once; the objective is then a pure loop over
// the grid.
class Objective {
 public:
  Objective(const TransferMap& plant, const WeightingFilters& w, std::span<const double> omegas,
            const PiSynthesisOptions& opt)
      : omegas_(omegas.begin(), omegas.end()), pts_(axis_points(omegas)), opt_(opt) {
    h_ = plant.evaluate(pts_);
    we_ = w.We.evaluate(pts_);
    wu_ = w.Wu.evaluate(pts_);
    if (opt.require_stable && plant.realization()) plant_rlz_ = plant.realization();
  }

  WeightedPerformance value(const PIController& k) const {
    std::vector<double> mag(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      const Complex kv = k(pts_[i]);
      const Complex den = 1.0 + h_[i] * kv;
      if (std::abs(den) <= std::numeric_limits<double>::min()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "1 + HK vanishes at omega = " << omegas_[i];
        throw Error(ErrorKind::loop_singularity, msg.str());
      }
      const Complex S = 1.0 / den;
      mag[i] = std::hypot(std::abs(we_[i] * S), std::abs(wu_[i] * kv * S));
    }
    std::size_t at = 0;
    const double g = simd::max_value(mag, &at);
    return {g, omegas_[at]};
  }

  bool stable(const PIController& k) const {
    if (!plant_rlz_) return true;
    for (Complex p : closed_loop_poles(*plant_rlz_, k)) {
      if (!(p.real() < 0.0)) return false;
    }
    return true;
  }

  // Log-coordinate objective used by the search; +inf outside the feasible set.
  double operator()(const std::array<double, 2>& x) const {
    const PIController k = from_log(x);
    if (!stable(k)) return kInf;
    try {
      return value(k).gamma;
    } catch (const Error&) {
      return kInf;
    }
  }

  PIController from_log(const std::array<double, 2>& x) const {
    const double lo = std::log10(opt_.lower);
    const double hi = std::log10(opt_.upper);
    return {std::pow(10.0, std::clamp(x[0], lo, hi)), std::pow(10.0, std::clamp(x[1], lo, hi))};
  }

 private:
  std::vector<double> omegas_;
  std::vector<Complex> pts_;
  std::vector<Complex> h_, we_, wu_;
  std::optional<DescriptorRealization> plant_rlz_;
  PiSynthesisOptions opt_;
};

struct SearchResult {
  std::array<double, 2> x{};
  double f = kInf;
  int evaluations = 0;
};

SearchResult nelder_mead(const Objective& f, std::array<double, 2> x0, const PiSynthesisOptions& opt) {
  using Point = std::array<double, 2>;
  constexpr double step = 0.25;  // a quarter decade
  std::array<Point, 3> p{x0, x0, x0};
  p[1][0] += step;
  p[2][1] += step;
  std::array<double, 3> fv{};
  SearchResult res;
  auto eval = [&](const Point& x) {
    ++res.evaluations;
    return f(x);
  };
  for (int i = 0; i < 3; ++i) fv[i] = eval(p[i]);

  for (int it = 0; it < opt.max_iterations; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const Point best = p[idx[0]];
    const Point mid = p[idx[1]];
    const Point worst = p[idx[2]];
    const double fb = fv[idx[0]], fm = fv[idx[1]], fw = fv[idx[2]];
    p = {best, mid, worst};
    fv = {fb, fm, fw};

    double size = 0.0;
    for (int i = 1; i < 3; ++i) {
      size = std::max({size, std::abs(p[i][0] - p[0][0]), std::abs(p[i][1] - p[0][1])});
    }
    if (std::isfinite(fw) && fw - fb <= opt.f_tol * std::max(1.0, std::abs(fb)) &&
        size <= opt.x_tol) {
      break;
    }
    if (size <= opt.x_tol * 1e-3) break;

    const Point c{(best[0] + mid[0]) / 2.0, (best[1] + mid[1]) / 2.0};
    auto along = [&](double t) { return Point{c[0] + t * (worst[0] - c[0]), c[1] + t * (worst[1] - c[1])}; };
    const Point xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fb) {
      const Point xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        p[2] = xe;
        fv[2] = fe;
      } else {
        p[2] = xr;
        fv[2] = fr;
      }
      continue;
    }
    if (fr < fm) {
      p[2] = xr;
      fv[2] = fr;
      continue;
    }
    const bool outside = fr < fw;
    const Point xc = outside ? along(-0.5) : along(0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fw)) {
      p[2] = xc;
      fv[2] = fc;
      continue;
    }
    for (int i = 1; i < 3; ++i) {
      p[i] = {best[0] + 0.5 * (p[i][0] - best[0]), best[1] + 0.5 * (p[i][1] - best[1])};
      fv[i] = eval(p[i]);
    }
  }
  const auto at = std::min_element(fv.begin(), fv.end()) - fv.begin();
  res.x = p[static_cast<std::size_t>(at)];
  res.f = fv[static_cast<std::size_t>(at)];
  return res;
}

}  // namespace

TransferMap PIController::transfer() const {
  std::ostringstream label;
  label.precision(17);
  label << kp << "+" << ki << "/s";
  return TransferMap::from_realization(realization(), label.str());
}

WeightingFilters WeightingFilters::standard() {
  DescriptorRealization we;  // 10 + 10/s
  we.E = Matrix::Ones(1, 1);
  we.A = Matrix::Zero(1, 1);
  we.B = Vector::Ones(1);
  we.C = RowVector::Constant(1, 10.0);
  we.D = 10.0;
  DescriptorRealization wu;  // 1 - 990/(s + 1000)
  wu.E = Matrix::Ones(1, 1);
  wu.A = Matrix::Constant(1, 1, -1000.0);
  wu.B = Vector::Ones(1);
  wu.C = RowVector::Constant(1, -990.0);
  wu.D = 1.0;
  return {TransferMap([](Complex s) { return 10.0 * (s + 1.0) / s; }, "10(s+1)/s", std::move(we)),
          TransferMap([](Complex s) { return (s + 10.0) / (s + 1000.0); }, "(s+10)/(s+1000)",
                      std::move(wu))};
}

WeightedPerformance eval_weighted_performance(const TransferMap& plant, const PIController& k,
                                              const WeightingFilters& w,
                                              std::span<const double> omegas) {
  if (omegas.empty()) throw Error(ErrorKind::argument, "empty performance grid");
  PiSynthesisOptions opt;
  opt.require_stable = false;
  return Objective(plant, w, omegas, opt).value(k);
}

std::vector<Complex> closed_loop_poles(const DescriptorRealization& plant, const PIController& k) {
  return poles(unity_feedback(series(plant, k.realization()))).finite;
}

PiSynthesisResult optimize_pi(const TransferMap& plant, const WeightingFilters& w,
                              std::span<const double> omegas, const PIController& start,
                              const PiSynthesisOptions& options) {
  if (omegas.empty()) throw Error(ErrorKind::argument, "empty performance grid");
  if (!(options.lower > 0.0) || !(options.upper > options.lower) || options.kp_starts < 1 ||
      options.ki_starts < 1) {
    throw Error(ErrorKind::argument, "invalid search box or seed counts");
  }
  const Objective f(plant, w, omegas, options);

  std::vector<std::array<double, 2>> seeds;
  const double lo = std::log10(options.lower);
  const double hi = std::log10(options.upper);
  auto spread = [&](int i, int n) { return n == 1 ? (lo + hi) / 2.0 : lo + (hi - lo) * i / (n - 1); };
  for (int i = 0; i < options.kp_starts; ++i) {
    for (int j = 0; j < options.ki_starts; ++j) {
      seeds.push_back({spread(i, options.kp_starts), spread(j, options.ki_starts)});
    }
  }
  const bool start_usable = start.kp > 0.0 && start.ki > 0.0;
  if (start_usable) seeds.push_back({std::log10(start.kp), std::log10(start.ki)});

  std::vector<SearchResult> runs(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t k) {
    if (std::isfinite(f(seeds[k]))) runs[k] = nelder_mead(f, seeds[k], options);
  });

  PiSynthesisResult out;
  out.start_gamma = start_usable ? f(seeds.back()) : kInf;
  const SearchResult* best = nullptr;
  for (const auto& r : runs) {
    out.evaluations += r.evaluations;
    if (std::isfinite(r.f) && (!best || r.f < best->f)) best = &r;
  }
  if (!best) {
    throw Error(ErrorKind::infeasible, "no seed gives a finite, stabilizing objective value");
  }
  out.controller = f.from_log(best->x);
  const WeightedPerformance perf = f.value(out.controller);
  out.gamma = perf.gamma;
  out.gamma_omega = perf.omega;
  if (plant.realization()) {
    out.closed_loop_poles = closed_loop_poles(*plant.realization(), out.controller);
    out.closed_loop_stable = std::all_of(out.closed_loop_poles.begin(), out.closed_loop_poles.end(),
                                         [](Complex p) { return p.real() < 0.0; });
  }
  return out;
}

LoopResponse loop_response(const TransferMap& plant, const PIController& k,
                           std::span<const double> omegas) {
  LoopResponse out;
  out.omega.assign(omegas.begin(), omegas.end());
  const std::vector<Complex> pts = axis_points(omegas);
  const std::vector<Complex> h = plant.evaluate(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Complex l = h[i] * k(pts[i]);
    const Complex den = 1.0 + l;
    if (std::abs(den) <= std::numeric_limits<double>::min()) {
      throw Error(ErrorKind::loop_singularity, "1 + HK vanishes on the grid");
    }
    out.sensitivity.push_back(1.0 / den);
    out.complementary.push_back(l / den);
  }
  return out;
}

}  // namespace loewner_lab
