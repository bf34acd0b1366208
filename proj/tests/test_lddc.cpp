#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "loewner_lab/error.hpp"
#include "loewner_lab/lddc.hpp"
#include "loewner_lab/plant.hpp"
#include "support.hpp"

using namespace loewner_lab;
using loewner_lab::testing::PoleResidueSystem;

namespace {

// A stable rational stand-in for plant data: 2/((s+1)(s+3)) + 0.1/(s+0.2).
const PoleResidueSystem kPlant{{-1.0, -3.0, -0.2}, {1.0, -1.0, 0.1}, 0.0};

const std::vector<double>& grid() {
  static const std::vector<double> w = log_frequencies(40, 0.02, 20.0);
  return w;
}

FrequencyDataset plant_data() {
  return close_conjugate(sample_transfer(kPlant.transfer(), grid()));
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::argument;
}

ReferenceModelSpec constant_reference(double c) {
  return {TransferMap::constant(c), {kInfinity}, {Complex(0.0)}};
}

}  // namespace

TEST(Achievability, SecondOrderReferencePasses) {
  const auto rep = check_achievability(second_order_reference(0.5));
  EXPECT_TRUE(rep.achievable);
  ASSERT_EQ(rep.checks.size(), 2u);
  EXPECT_TRUE(std::isinf(rep.checks[0].point.real()));
  EXPECT_LT(rep.checks[0].residual, 1e-6);
  EXPECT_NEAR(rep.checks[1].residual, 0.0, 1e-15);
}

TEST(Achievability, ConstantModelsFail) {
  const auto one = check_achievability(constant_reference(1.0));
  EXPECT_FALSE(one.achievable);
  EXPECT_FALSE(one.checks[0].pass);  // M(inf) = 0 violated
  EXPECT_TRUE(one.checks[1].pass);
  const auto zero = check_achievability(constant_reference(0.0));
  EXPECT_FALSE(zero.achievable);
  EXPECT_TRUE(zero.checks[0].pass);
  EXPECT_FALSE(zero.checks[1].pass);  // M(0) = 1 violated
}

TEST(IdealController, RecoversKnownController) {
  const PoleResidueSystem k0{{-0.5}, {0.3}, 0.8};
  const auto m = pi_loop_reference(kPlant.transfer(), 0.0, 0.0);  // constraint set only
  ReferenceModelSpec ref_model{feedback(series(kPlant.transfer(), k0.transfer())), m.zero_set, m.unit_set};
  const auto kstar = ideal_controller_response(plant_data(), ref_model);
  EXPECT_TRUE(kstar.conjugate_closed());
  for (const auto& s : kstar.samples()) {
    EXPECT_LE(loewner_lab::testing::rel_err(s.phi, k0(s.z)), 1e-12);
  }
}

TEST(IdealController, ZeroReference) {
  const auto kstar = ideal_controller_response(plant_data(), constant_reference(0.0));
  for (const auto& s : kstar.samples()) EXPECT_EQ(s.phi, Complex(0.0));
}

TEST(IdealController, DivisionByZero) {
  EXPECT_EQ(kind_of([] { ideal_controller_response(plant_data(), constant_reference(1.0)); }),
            ErrorKind::division_by_zero);
  const FrequencyDataset zero_plant({{Complex(0.0, 1.0), Complex(0.0)}});
  try {
    ideal_controller_response(zero_plant, second_order_reference());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::division_by_zero);
    EXPECT_NE(std::string(e.what()).find("omega = 1"), std::string::npos) << e.what();
  }
}

TEST(SmallGain, Examples) {
  const auto d = plant_data();
  const auto one = small_gain_bound(d, constant_reference(1.0));
  EXPECT_EQ(one.gamma, 0.0);
  EXPECT_TRUE(one.vacuous);
  const auto zero = small_gain_bound(d, constant_reference(0.0));
  double peak = 0.0;
  for (const auto& s : d.samples()) peak = std::max(peak, std::abs(s.phi));
  EXPECT_DOUBLE_EQ(zero.gamma, peak);
  EXPECT_FALSE(zero.vacuous);
}

TEST(SmallGain, ScalesLinearlyWithPlant) {
  const auto d = plant_data();
  const auto m = second_order_reference(0.5);
  const double g = small_gain_bound(d, m).gamma;
  for (double alpha : {2.0, 7.5}) {
    std::vector<FrequencySample> scaled = d.samples();
    for (auto& s : scaled) s.phi *= alpha;
    EXPECT_NEAR(small_gain_bound(FrequencyDataset(scaled, true), m).gamma, alpha * g, 1e-13 * alpha * g);
  }
}

TEST(SmallGain, GridMismatch) {
  const auto d = plant_data();
  std::vector<FrequencySample> other = d.samples();
  other[3].z += Complex(0.0, 1e-3);
  EXPECT_EQ(kind_of([&] { small_gain_bound(d, FrequencyDataset(other)); }), ErrorKind::grid_mismatch);
  other.pop_back();
  EXPECT_EQ(kind_of([&] { small_gain_bound(d, FrequencyDataset(other)); }), ErrorKind::grid_mismatch);
}

TEST(ReduceController, RecoversPiFromItsClosedLoop) {
  const auto ref_model = pi_loop_reference(kPlant.transfer(), 0.191, 0.0252);
  const auto kstar = ideal_controller_response(plant_data(), ref_model);
  const auto sweep = reduce_controller(kstar, {1, 2, 3});
  ASSERT_EQ(sweep.rows.size(), 3u);
  const auto& row = sweep.rows[0];
  ASSERT_TRUE(row.controller) << row.message;
  EXPECT_TRUE(row.folded_feedthrough);
  const auto f = first_order_form(*row.controller);
  EXPECT_NEAR(f.kp(), 0.191, 1e-6);
  EXPECT_NEAR(f.ki(), 0.0252, 1e-6);
  EXPECT_NEAR(f.pole, 0.0, 1e-6);
  EXPECT_LT(row.error, 1e-6);
  // Without a bound nothing is certified.
  for (const auto& r : sweep.rows) EXPECT_NE(r.verdict, ReductionVerdict::safe);
}

TEST(ReduceController, RoundTripKnownController) {
  const PoleResidueSystem k0{{-0.4, Complex(-1.0, 2.0), Complex(-1.0, -2.0)},
                             {0.5, Complex(0.1, 0.3), Complex(0.1, -0.3)}, 0.0};
  const auto m = pi_loop_reference(kPlant.transfer(), 0.0, 0.0);
  ReferenceModelSpec ref_model{feedback(series(kPlant.transfer(), k0.transfer())), m.zero_set, m.unit_set};
  const auto kstar = ideal_controller_response(plant_data(), ref_model);
  const LoewnerModel model(pencil_from_data(kstar));
  EXPECT_EQ(model.rank(1e-10).rank, 3);
  const auto sweep = reduce_controller(kstar, {1, 2, 3, 4});
  const auto& full = sweep.rows[2];
  ASSERT_TRUE(full.controller);
  for (const auto& s : kstar.samples()) {
    EXPECT_LE(loewner_lab::testing::rel_err(eval_transfer(*full.controller, s.z), k0(s.z)), 1e-6);
  }
  EXPECT_LT(full.error, 1e-6);
  EXPECT_LE(full.error, sweep.rows[0].error);
}

TEST(ReduceController, VerdictsAreOneSided) {
  const auto data = plant_data();
  const auto ref_model = second_order_reference(0.5);
  const auto kstar = ideal_controller_response(data, ref_model);
  ReductionOptions opt;
  opt.bound = small_gain_bound(data, ref_model);
  std::vector<int> orders;
  for (int r = 1; r <= 8; ++r) orders.push_back(r);
  const auto sweep = reduce_controller(kstar, orders, opt);
  const int minimal = LoewnerModel(pencil_from_data(kstar), false).rank(1e-10).rank;
  for (std::size_t k = 0; k < sweep.rows.size(); ++k) {
    const auto& row = sweep.rows[k];
    EXPECT_EQ(row.order, orders[k]);
    if (row.verdict == ReductionVerdict::failed) {
      // Only past the minimal order, where the projected pencil is singular.
      EXPECT_GT(row.order, minimal) << row.message;
      continue;
    }
    if (row.verdict == ReductionVerdict::safe) {
      EXPECT_LT(row.error, sweep.gamma_inverse());
    } else {
      EXPECT_EQ(row.verdict, ReductionVerdict::inconclusive);
      EXPECT_GE(row.error, sweep.gamma_inverse());
    }
  }
  if (sweep.smallest_safe_order) {
    for (const auto& row : sweep.rows) {
      if (row.order >= *sweep.smallest_safe_order) {
        EXPECT_EQ(row.verdict, ReductionVerdict::safe);
      }
    }
  }
}

TEST(ReduceController, RejectsBadOrders) {
  const auto kstar = ideal_controller_response(plant_data(), second_order_reference(0.5));
  EXPECT_THROW(reduce_controller(kstar, {2, 1}), Error);
  EXPECT_THROW(reduce_controller(kstar, {1, 100}), Error);
}

TEST(FirstOrderForm, ReadsGainResidueAndPole) {
  const auto f = first_order_form(pi_realization(0.3, 0.07));
  EXPECT_EQ(f.kp(), 0.3);
  EXPECT_EQ(f.ki(), 0.07);
  EXPECT_EQ(f.pole, 0.0);
  EXPECT_THROW(first_order_form(DescriptorRealization::gain(1.0)), Error);
}

TEST(ReduceController, DrivingExampleFirstOrderPole) {
  const auto w = log_frequencies(200, 2.0 * std::numbers::pi * 1e-2, 2.0 * std::numbers::pi);
  const auto data = close_conjugate(sample_transfer(plant_transfer(), w));
  const auto sweep = reduce_controller(ideal_controller_response(data, second_order_reference(0.5)), {1});
  ASSERT_TRUE(sweep.rows[0].controller) << sweep.rows[0].message;
  const auto f = first_order_form(*sweep.rows[0].controller);
  EXPECT_NEAR(f.pole, -0.0382, 0.02 * 0.0382);
  EXPECT_EQ(f.feedthrough, 0.0);
}
