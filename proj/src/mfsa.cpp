#include "loewner_lab/mfsa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "loewner_lab/error.hpp"
#include "loewner_lab/freq_data.hpp"
#include "loewner_lab/loewner.hpp"
#include "loewner_lab/parallel.hpp"

namespace loewner_lab {

namespace {

struct Interpolant {
  int order = 0;
  std::optional<DescriptorRealization> rlz;  // empty when the data vanish
};

// The partition needs an even number of frequencies; drop the last one if not.
Interpolant interpolate(std::vector<FrequencySample> samples, double svd_tol) {
  if (samples.size() % 2 == 1) samples.pop_back();
  const bool all_zero = std::all_of(samples.begin(), samples.end(),
                                    [](const FrequencySample& s) { return s.phi == Complex(0.0); });
  if (all_zero) return {};
  const LoewnerModel model(pencil_from_data(FrequencyDataset(samples)), false);
  const int r = model.rank(svd_tol).rank;
  return {r, model.realization(r)};
}

std::vector<Complex> antistable_of(const DescriptorRealization& rlz) {
  std::vector<Complex> out;
  for (Complex p : poles(rlz).finite) {
    if (p.real() >= 0.0) out.push_back(p);
  }
  return out;
}

bool reproduced(const std::vector<Complex>& candidates, Complex p, const MfsaOptions& opt) {
  return std::any_of(candidates.begin(), candidates.end(), [&](Complex q) {
    return std::abs(q - p) <= opt.match_rel * std::abs(p) + opt.match_abs;
  });
}

std::vector<FrequencySample> every_other(const std::vector<FrequencySample>& s, std::size_t first) {
  std::vector<FrequencySample> out;
  for (std::size_t k = first; k < s.size(); k += 2) out.push_back(s[k]);
  return out;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw Error(ErrorKind::argument, "linspace needs n >= 1");
  if (n == 1) return {a};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
  out.back() = b;
  return out;
}

StabilityReport stability_tag(const TransferMap& h, std::span<const double> omegas,
                              const MfsaOptions& options) {
  if (!(options.epsilon > 0.0)) throw Error(ErrorKind::argument, "epsilon must be positive");
  StabilityReport rep;
  rep.epsilon = options.epsilon;

  const FrequencyDataset data = sample_transfer(h, omegas);
  const Interpolant full = interpolate(data.samples(), options.svd_tol);
  rep.order = full.order;
  if (!full.rlz) {
    rep.message = "sampled response is identically zero";
    return rep;
  }

  std::vector<Complex> unstable = antistable_of(*full.rlz);
  for (Complex p : poles(*full.rlz).finite) {
    if (std::abs(p.real()) < kImagAxisGuard) {
      rep.verdict = Verdict::inconclusive;
      rep.message = "interpolant has a pole inside the imaginary-axis guard band";
      return rep;
    }
  }
  if (unstable.empty()) return rep;

  std::vector<Complex> confirmed = unstable;
  if (options.cross_validate) {
    std::vector<Complex> even, odd;
    try {
      const Interpolant a = interpolate(every_other(data.samples(), 0), options.svd_tol);
      const Interpolant b = interpolate(every_other(data.samples(), 1), options.svd_tol);
      if (a.rlz) even = antistable_of(*a.rlz);
      if (b.rlz) odd = antistable_of(*b.rlz);
    } catch (const Error&) {
      // A half that cannot be interpolated confirms nothing.
    }
    confirmed.clear();
    for (Complex p : unstable) {
      if (reproduced(even, p, options) && reproduced(odd, p, options)) {
        confirmed.push_back(p);
      } else {
        rep.rejected_poles.push_back(p);
      }
    }
  }
  rep.antistable_poles = confirmed;

  const std::vector<double> dense = densify_log_grid(omegas, options.norm_densify);
  auto gap = [&](const std::function<bool(Complex)>& select) -> GridMax {
    const SpectralParts parts = spectral_split(*full.rlz, select);
    if (parts.selected.order() == 0) return {};
    return linf_norm_grid(TransferMap::from_realization(parts.selected, "antistable"), dense);
  };
  try {
    const GridMax raw = gap([](Complex p) { return p.real() >= 0.0; });
    rep.raw_tag = raw.value;
    if (confirmed.size() == unstable.size()) {
      rep.stab_tag = raw.value;
      rep.argmax_omega = raw.omega;
    } else if (!confirmed.empty()) {
      const GridMax kept = gap([&](Complex p) {
        if (p.real() < 0.0) return false;
        return std::any_of(confirmed.begin(), confirmed.end(),
                           [&](Complex q) { return std::abs(q - p) <= 1e-8 * std::abs(q); });
      });
      rep.stab_tag = kept.value;
      rep.argmax_omega = kept.omega;
    }
  } catch (const Error& e) {
    rep.verdict = Verdict::inconclusive;
    rep.message = e.what();
    return rep;
  }
  rep.verdict = rep.stab_tag < options.epsilon ? Verdict::stable : Verdict::unstable;
  return rep;
}

DelaySweepResult delay_margin_sweep(const TransferMap& plant, const TransferMap& k,
                                    std::span<const double> taus, std::span<const double> omegas,
                                    const DelaySweepOptions& options) {
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] > taus[i - 1])) throw Error(ErrorKind::argument, "delays must be ascending");
  }
  if (!(options.mfsa.epsilon > 0.0)) throw Error(ErrorKind::argument, "epsilon must be positive");
  const std::vector<double> dense = densify_log_grid(omegas, options.delay_densify);

  auto evaluate = [&](double tau) {
    StabilityReport rep;
    try {
      const TransferMap cl = closed_loop_delay(plant, k, tau);
      rep = stability_tag(cl, tau > 0.0 ? std::span<const double>(dense) : omegas, options.mfsa);
    } catch (const Error& e) {
      rep.epsilon = options.mfsa.epsilon;
      rep.verdict = Verdict::inconclusive;
      rep.message = e.what();
    }
    return rep;
  };

  DelaySweepResult out;
  out.rows.resize(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) { out.rows[i] = {taus[i], evaluate(taus[i])}; });

  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    if (out.rows[i].report.verdict != Verdict::unstable) continue;
    out.first_unstable_tau = out.rows[i].tau;
    if (options.refine_steps > 0 && i > 0 &&
        out.rows[i - 1].report.verdict == Verdict::stable) {
      double lo = out.rows[i - 1].tau;
      double hi = out.rows[i].tau;
      for (int step = 0; step < options.refine_steps; ++step) {
        const double mid = 0.5 * (lo + hi);
        const Verdict v = evaluate(mid).verdict;
        if (v == Verdict::unstable) {
          hi = mid;
        } else if (v == Verdict::stable) {
          lo = mid;
        } else {
          break;
        }
      }
      out.refined_tau = hi;
    }
    break;
  }
  return out;
}

std::vector<Complex> nyquist_curve(const TransferMap& plant, const TransferMap& k, double tau,
                                   std::span<const double> omegas) {
  if (omegas.empty()) throw Error(ErrorKind::argument, "empty frequency grid");
  std::vector<Complex> pts;
  pts.reserve(omegas.size());
  for (double w : omegas) pts.emplace_back(0.0, w);
  const std::vector<Complex> h = plant.evaluate(pts);
  const std::vector<Complex> kv = k.evaluate(pts);
  std::vector<Complex> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = h[i] * kv[i] * std::exp(-tau * pts[i]);
  return out;
}

}  // namespace loewner_lab
