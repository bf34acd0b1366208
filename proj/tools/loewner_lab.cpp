// Command-line front end: sample, approximate, lddc, synth, mfsa, delay-sweep.
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loewner_lab/error.hpp"
#include "loewner_lab/freq_data.hpp"
#include "loewner_lab/io.hpp"
#include "loewner_lab/lddc.hpp"
#include "loewner_lab/loewner.hpp"
#include "loewner_lab/mfsa.hpp"
#include "loewner_lab/pi_synth.hpp"
#include "loewner_lab/plant.hpp"

namespace fs = std::filesystem;
using namespace loewner_lab;
using json = nlohmann::ordered_json;

namespace {

struct GridSpec {
  int n = 200;
  double w_min = 2.0 * std::numbers::pi * 1e-2;
  double w_max = 2.0 * std::numbers::pi;
  std::vector<double> omegas() const { return log_frequencies(n, w_min, w_max); }
};

struct Config {
  GridSpec grid;
  double svd_tol = 1e-10;
  double epsilon = 1e-10;
  std::string out_dir;
  std::string plant = "builtin";
  PlantParameters params;
};

void add_common(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--grid-n,--n", cfg.grid.n, "number of log-spaced frequencies")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  cmd->add_option("--wmin", cfg.grid.w_min, "lowest frequency (rad/s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--wmax", cfg.grid.w_max, "highest frequency (rad/s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--out", cfg.out_dir, "directory for artifact files");
}

void add_tolerances(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--svd-tol", cfg.svd_tol, "relative singular value threshold")
      ->check(CLI::Range(1e-300, 1.0))
      ->capture_default_str();
  cmd->add_option("--epsilon", cfg.epsilon, "stability tag threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_plant(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--plant", cfg.plant, "plant source")->check(CLI::IsMember({"builtin"}))->capture_default_str();
  cmd->add_option("--x-m", cfg.params.x_m, "measurement abscissa")->capture_default_str();
  cmd->add_option("--omega0", cfg.params.omega0, "actuator natural frequency")->capture_default_str();
  cmd->add_option("--damping", cfg.params.damping, "actuator damping")->capture_default_str();
}

fs::path output_path(const Config& cfg, const std::string& name) {
  if (cfg.out_dir.empty()) return name;
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

FrequencyDataset load_data(const std::string& path) {
  const fs::path p(path);
  return p.extension() == ".json" ? load_json(p) : load_csv(p);
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json complex_list(const std::vector<Complex>& v) {
  json out = json::array();
  for (Complex z : v) out.push_back(complex_json(z));
  return out;
}

// Controller file: either a realization or {"kp": .., "ki": ..}.
TransferMap load_controller(const std::string& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("controller file: ") + e.what());
  }
  if (j.contains("kp") && j.contains("ki")) {
    const PIController k{j["kp"].get<double>(), j["ki"].get<double>()};
    return k.transfer();
  }
  return TransferMap::from_realization(realization_from_json(text), "controller");
}

std::string csv_complex_rows(const std::vector<double>& w, const std::vector<Complex>& v) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < w.size(); ++k) {
    rows.push_back({format_double(w[k]), format_double(v[k].real()), format_double(v[k].imag())});
  }
  return csv_table({"omega_rad_s", "re", "im"}, rows);
}

DescriptorRealization builtin_approximant(const Config& cfg, int order) {
  const auto data = sample_transfer(plant_transfer(cfg.params), cfg.grid.omegas());
  return LoewnerModel(pencil_from_data(data), false).realization(order);
}

json report_json(const StabilityReport& r) {
  json j;
  j["stab_tag"] = r.stab_tag;
  j["raw_tag"] = r.raw_tag;
  j["epsilon"] = r.epsilon;
  j["verdict"] = std::string(to_string(r.verdict));
  j["order"] = r.order;
  j["argmax_omega"] = r.argmax_omega;
  j["antistable_poles"] = complex_list(r.antistable_poles);
  j["rejected_poles"] = complex_list(r.rejected_poles);
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

// ------------------------------------------------------------------ commands

void run_sample(const Config& cfg) {
  const auto data = sample_transfer(plant_transfer(cfg.params), cfg.grid.omegas());
  if (cfg.out_dir.empty()) {
    std::cout << to_csv(data);
  } else {
    const auto path = output_path(cfg, "plant_data.csv");
    save_csv(data, path);
    print(json{{"samples", data.size()}, {"file", path.string()}});
  }
}

void run_approximate(const Config& cfg, const std::string& input, std::optional<int> order) {
  const FrequencyDataset data = input.empty()
                                    ? sample_transfer(plant_transfer(cfg.params), cfg.grid.omegas())
                                    : load_data(input);
  const FrequencyDataset closed = close_conjugate(data);
  const LoewnerModel model(pencil_from_data(closed));
  const RankReport rep = model.rank(cfg.svd_tol);
  const int r = order.value_or(rep.rank);
  const DescriptorRealization rlz = model.realization(r);
  const auto res = interpolation_residuals(rlz, closed);
  const auto path = output_path(cfg, "realization.json");
  save_realization(rlz, path);

  json j;
  j["samples"] = closed.size();
  j["svd_tol"] = cfg.svd_tol;
  j["detected_rank"] = rep.rank;
  j["rank_row"] = rep.rank_row;
  j["rank_col"] = rep.rank_col;
  j["rank_pencil"] = rep.rank_pencil;
  j["rank_loewner"] = rep.rank_loewner;
  j["consistent"] = rep.consistent;
  j["order"] = r;
  j["max_relative_residual"] = *std::max_element(res.begin(), res.end());
  j["singular_values"] = rep.sv_row;
  j["realization"] = path.string();
  if (!rep.consistent) std::cerr << "warning: row and column ranks differ; using the larger\n";
  print(j);
}

struct LddcArgs {
  std::string input;
  std::string reference = "m2";
  int max_order = 20;
  std::optional<int> order;
  int m2_order = 33;
  double kp = 0.191;
  double ki = 0.0252;
  double wn = 0.5;
};

void run_lddc(const Config& cfg, const LddcArgs& a) {
  const auto omegas = cfg.grid.omegas();
  const FrequencyDataset raw =
      a.input.empty() ? sample_transfer(plant_transfer(cfg.params), omegas) : load_data(a.input);
  const FrequencyDataset plant_data = close_conjugate(raw);

  json j;
  std::optional<ReferenceModelSpec> ref_model;
  SmallGainBound bound;
  FrequencyDataset kstar;
  if (a.reference == "m1") {
    ref_model = second_order_reference(a.wn);
  } else if (a.reference == "m2") {
    const DescriptorRealization approx =
        LoewnerModel(pencil_from_data(plant_data), false).realization(a.m2_order);
    ref_model = pi_loop_reference(TransferMap::from_realization(approx, "approximant"), a.kp, a.ki);
  } else if (fs::path(a.reference).extension() == ".json") {
    const auto rlz = load_realization(a.reference);
    ref_model = ReferenceModelSpec{TransferMap::from_realization(rlz, "reference"), {kInfinity}, {Complex(0.0)}};
  }
  if (ref_model) {
    const auto ach = check_achievability(*ref_model);
    json checks = json::array();
    for (const auto& c : ach.checks) {
      checks.push_back({{"point", std::isinf(c.point.real()) ? json("inf") : complex_json(c.point)},
                        {"target", c.target},
                        {"residual", c.residual},
                        {"pass", c.pass}});
    }
    j["achievable"] = ach.achievable;
    j["constraints"] = checks;
    kstar = ideal_controller_response(plant_data, *ref_model);
    bound = small_gain_bound(plant_data, *ref_model);
  } else {
    // Sampled reference on the plant grid.
    const FrequencyDataset m = close_conjugate(load_data(a.reference));
    bound = small_gain_bound(plant_data, m);
    std::vector<FrequencySample> ks;
    for (std::size_t k = 0; k < plant_data.size(); ++k) {
      const Complex phi = plant_data.samples()[k].phi;
      const Complex mv = m.samples()[k].phi;
      if (phi == Complex(0.0) || std::abs(1.0 - mv) <= 1e-14) {
        throw Error(ErrorKind::division_by_zero, "ideal controller undefined on the grid");
      }
      ks.push_back({plant_data.samples()[k].z, mv / (phi * (1.0 - mv))});
    }
    kstar = FrequencyDataset(std::move(ks), true);
  }

  const int minimal = LoewnerModel(pencil_from_data(kstar), false).rank(cfg.svd_tol).rank;
  std::vector<int> orders;
  for (int r = 1; r <= a.max_order; ++r) orders.push_back(r);
  ReductionOptions opt;
  opt.bound = bound;
  const ReductionSweep sweep = reduce_controller(kstar, orders, opt);

  std::vector<std::vector<std::string>> rows;
  for (const auto& row : sweep.rows) {
    rows.push_back({std::to_string(row.order), format_double(row.error),
                    format_double(sweep.gamma_inverse()), std::string(to_string(row.verdict))});
  }
  const auto sweep_path = output_path(cfg, "lddc_sweep.csv");
  write_text(sweep_path, csv_table({"order", "error", "gamma_inverse", "verdict"}, rows));

  const int chosen = a.order.value_or(sweep.smallest_safe_order.value_or(1));
  bool folded = false;
  const LoewnerModel kmodel(pencil_from_data(kstar), false);
  double wmax = 0.0;
  for (const auto& s : kstar.samples()) wmax = std::max(wmax, std::abs(s.z));
  const DescriptorRealization ctrl = fit_controller(kmodel, chosen, wmax, 1e4, &folded);
  const auto ctrl_path = output_path(cfg, "controller.json");
  save_realization(ctrl, ctrl_path);

  j["reference"] = a.reference;
  j["ideal_controller_order"] = minimal;
  j["gamma_tilde"] = bound.gamma;
  j["gamma_inverse"] = sweep.gamma_inverse();
  j["vacuous_bound"] = bound.vacuous;
  j["smallest_safe_order"] = sweep.smallest_safe_order ? json(*sweep.smallest_safe_order) : json(nullptr);
  j["controller_order"] = chosen;
  if (ctrl.order() == 1) {
    const auto f = first_order_form(ctrl);
    j["controller_form"] = {{"feedthrough", f.feedthrough}, {"residue", f.residue}, {"pole", f.pole}};
  }
  j["sweep"] = sweep_path.string();
  j["controller"] = ctrl_path.string();
  print(j);
}

struct SynthArgs {
  std::string realization;
  int order = 33;
  double kp = 0.191;
  double ki = 0.0252;
};

void run_synth(const Config& cfg, const SynthArgs& a) {
  const auto omegas = cfg.grid.omegas();
  const DescriptorRealization rlz =
      a.realization.empty() ? builtin_approximant(cfg, a.order) : load_realization(a.realization);
  const TransferMap plant = TransferMap::from_realization(rlz, "approximant");
  const WeightingFilters weights = WeightingFilters::standard();
  const PiSynthesisResult res = optimize_pi(plant, weights, omegas, {a.kp, a.ki});

  const LoopResponse approx = loop_response(plant, res.controller, omegas);
  write_text(output_path(cfg, "sensitivity.csv"), csv_complex_rows(omegas, approx.sensitivity));
  write_text(output_path(cfg, "complementary_sensitivity.csv"),
             csv_complex_rows(omegas, approx.complementary));
  json j;
  j["kp"] = res.controller.kp;
  j["ki"] = res.controller.ki;
  j["gamma"] = res.gamma;
  j["gamma_omega"] = res.gamma_omega;
  j["start_gamma"] = res.start_gamma;
  j["closed_loop_stable"] = res.closed_loop_stable ? json(*res.closed_loop_stable) : json(nullptr);
  j["evaluations"] = res.evaluations;
  if (a.realization.empty()) {
    const LoopResponse oracle = loop_response(plant_transfer(cfg.params), res.controller, omegas);
    write_text(output_path(cfg, "sensitivity_oracle.csv"), csv_complex_rows(omegas, oracle.sensitivity));
    double worst = 0.0;
    for (std::size_t k = 0; k < omegas.size(); ++k) {
      worst = std::max(worst, std::abs(approx.sensitivity[k] - oracle.sensitivity[k]) /
                                  std::abs(oracle.sensitivity[k]));
    }
    j["sensitivity_max_relative_gap"] = worst;
  }
  write_text(output_path(cfg, "pi.json"),
             json{{"kp", res.controller.kp}, {"ki", res.controller.ki}, {"gamma", res.gamma}}.dump(2) + "\n");
  print(j);
}

struct MfsaArgs {
  std::string controller;
  std::string realization;
  double tau = 0.0;
  bool no_cross_validate = false;
  double tau_min = 4.6;
  double tau_max = 5.5;
  int tau_n = 20;
  int refine = 0;
  int densify = 4;
};

TransferMap mfsa_target(const Config& cfg, const MfsaArgs& a) {
  const TransferMap base = a.realization.empty()
                               ? plant_transfer(cfg.params)
                               : TransferMap::from_realization(load_realization(a.realization), "system");
  if (a.controller.empty()) return base;
  return closed_loop_delay(base, load_controller(a.controller), a.tau);
}

void run_mfsa(const Config& cfg, const MfsaArgs& a) {
  MfsaOptions opt;
  opt.epsilon = cfg.epsilon;
  opt.svd_tol = cfg.svd_tol;
  opt.cross_validate = !a.no_cross_validate;
  const TransferMap h = mfsa_target(cfg, a);
  std::vector<double> omegas = cfg.grid.omegas();
  if (!a.controller.empty() && a.tau > 0.0) omegas = densify_log_grid(omegas, a.densify);
  const StabilityReport rep = stability_tag(h, omegas, opt);
  json j = report_json(rep);
  j["tau"] = a.tau;
  if (!cfg.out_dir.empty()) write_text(output_path(cfg, "stability_report.json"), j.dump(2) + "\n");
  print(j);
}

void run_delay_sweep(const Config& cfg, const MfsaArgs& a) {
  if (a.controller.empty()) throw CLI::ValidationError("--controller", "required for delay-sweep");
  if (a.tau_n < 1 || !(a.tau_max >= a.tau_min) || a.tau_min < 0.0) {
    throw CLI::ValidationError("--tau-*", "need 0 <= tau-min <= tau-max and tau-n >= 1");
  }
  const TransferMap plant = a.realization.empty()
                                ? plant_transfer(cfg.params)
                                : TransferMap::from_realization(load_realization(a.realization), "plant");
  const TransferMap k = load_controller(a.controller);
  const auto omegas = cfg.grid.omegas();
  const auto taus = linspace(a.tau_min, a.tau_max, a.tau_n);
  DelaySweepOptions opt;
  opt.mfsa.epsilon = cfg.epsilon;
  opt.mfsa.svd_tol = cfg.svd_tol;
  opt.mfsa.cross_validate = !a.no_cross_validate;
  opt.refine_steps = a.refine;
  opt.delay_densify = a.densify;
  const DelaySweepResult res = delay_margin_sweep(plant, k, taus, omegas, opt);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<std::string>> nyq;
  json jrows = json::array();
  for (const auto& row : res.rows) {
    rows.push_back({format_double(row.tau), format_double(row.report.stab_tag),
                    std::string(to_string(row.report.verdict))});
    jrows.push_back({{"tau", row.tau},
                     {"stab_tag", row.report.stab_tag},
                     {"raw_tag", row.report.raw_tag},
                     {"verdict", std::string(to_string(row.report.verdict))}});
    const auto curve = nyquist_curve(plant, k, row.tau, omegas);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      nyq.push_back({format_double(omegas[i]), format_double(curve[i].real()),
                     format_double(curve[i].imag()), format_double(row.tau)});
    }
  }
  const auto sweep_path = output_path(cfg, "delay_sweep.csv");
  const auto nyq_path = output_path(cfg, "nyquist.csv");
  write_text(sweep_path, csv_table({"tau_s", "stab_tag", "verdict"}, rows));
  write_text(nyq_path, csv_table({"omega_rad_s", "re", "im", "tau_s"}, nyq));
  json j;
  j["rows"] = jrows;
  j["first_unstable_tau"] = res.first_unstable_tau ? json(*res.first_unstable_tau) : json(nullptr);
  if (res.refined_tau) j["refined_tau"] = *res.refined_tau;
  j["sweep"] = sweep_path.string();
  j["nyquist"] = nyq_path.string();
  print(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loewner-framework frequency-domain toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Config cfg;

  auto* sample = app.add_subcommand("sample", "sample the built-in plant to CSV");
  add_common(sample, cfg);
  add_plant(sample, cfg);

  std::string approx_input;
  std::optional<int> approx_order;
  auto* approximate = app.add_subcommand("approximate", "Loewner realization from frequency data");
  approximate->add_option("data", approx_input, "CSV or JSON frequency data (default: built-in plant)")
      ->check(CLI::ExistingFile);
  approximate->add_option("--order", approx_order, "realization order (default: detected rank)")
      ->check(CLI::PositiveNumber);
  add_common(approximate, cfg);
  add_tolerances(approximate, cfg);
  add_plant(approximate, cfg);

  LddcArgs lddc_args;
  auto* lddc = app.add_subcommand("lddc", "data-driven controller from a reference model");
  lddc->add_option("data", lddc_args.input, "plant frequency data (default: built-in plant)")
      ->check(CLI::ExistingFile);
  lddc->add_option("--reference", lddc_args.reference, "m1 | m2 | realization .json | sampled .csv")
      ->check(CLI::IsMember({"m1", "m2"}) | CLI::ExistingFile)
      ->capture_default_str();
  lddc->add_option("--max-order", lddc_args.max_order, "largest swept order")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  lddc->add_option("--order", lddc_args.order, "order of the emitted controller")->check(CLI::PositiveNumber);
  lddc->add_option("--m2-order", lddc_args.m2_order, "approximant order used to build m2")->capture_default_str();
  lddc->add_option("--kp", lddc_args.kp, "m2 proportional gain")->capture_default_str();
  lddc->add_option("--ki", lddc_args.ki, "m2 integral gain")->capture_default_str();
  lddc->add_option("--wn", lddc_args.wn, "m1 bandwidth")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(lddc, cfg);
  add_tolerances(lddc, cfg);
  add_plant(lddc, cfg);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "weighted PI synthesis on a realization");
  synth->add_option("realization", synth_args.realization, "realization JSON (default: built-in approximant)")
      ->check(CLI::ExistingFile);
  synth->add_option("--order", synth_args.order, "order of the built-in approximant")->capture_default_str();
  synth->add_option("--kp", synth_args.kp, "start kp")->capture_default_str();
  synth->add_option("--ki", synth_args.ki, "start ki")->capture_default_str();
  add_common(synth, cfg);
  add_plant(synth, cfg);

  MfsaArgs mfsa_args;
  auto add_mfsa = [&](CLI::App* cmd) {
    cmd->add_option("--controller", mfsa_args.controller, "controller JSON (realization or kp/ki)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--realization", mfsa_args.realization, "use this realization instead of the plant")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--no-cross-validate", mfsa_args.no_cross_validate,
                  "count every antistable mode of the interpolant");
    cmd->add_option("--densify", mfsa_args.densify, "grid refinement for tau > 0")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    add_common(cmd, cfg);
    add_tolerances(cmd, cfg);
    add_plant(cmd, cfg);
  };
  auto* mfsa = app.add_subcommand("mfsa", "stability tag of a (closed-loop) transfer");
  mfsa->add_option("--tau", mfsa_args.tau, "loop delay (s)")->check(CLI::NonNegativeNumber)->capture_default_str();
  add_mfsa(mfsa);

  auto* sweep = app.add_subcommand("delay-sweep", "stability tag across loop delays");
  sweep->add_option("--tau-min", mfsa_args.tau_min)->check(CLI::NonNegativeNumber)->capture_default_str();
  sweep->add_option("--tau-max", mfsa_args.tau_max)->check(CLI::NonNegativeNumber)->capture_default_str();
  sweep->add_option("--tau-n", mfsa_args.tau_n)->check(CLI::Range(1, 100000))->capture_default_str();
  sweep->add_option("--refine", mfsa_args.refine, "bisection steps on the first unstable interval")
      ->check(CLI::Range(0, 60))
      ->capture_default_str();
  add_mfsa(sweep);

  try {
    app.parse(argc, argv);
    if (!(cfg.grid.w_max > cfg.grid.w_min)) throw CLI::ValidationError("--wmax", "must exceed --wmin");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sample) run_sample(cfg);
    if (*approximate) run_approximate(cfg, approx_input, approx_order);
    if (*lddc) run_lddc(cfg, lddc_args);
    if (*synth) run_synth(cfg, synth_args);
    if (*mfsa) run_mfsa(cfg, mfsa_args);
    if (*sweep) run_delay_sweep(cfg, mfsa_args);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
