#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "loewner_lab/error.hpp"
#include "loewner_lab/freq_data.hpp"
#include "loewner_lab/io.hpp"

using namespace loewner_lab;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::argument;
}

FrequencyDataset pairs(int n) {
  std::vector<FrequencySample> s;
  for (int k = 1; k <= n; ++k) s.push_back({Complex(0.0, k), Complex(k, -k)});
  return close_conjugate(FrequencyDataset(s));
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("loewner_lab_test_" + name);
}

}  // namespace

TEST(Dataset, RejectsDuplicates) {
  EXPECT_EQ(kind_of([] {
              FrequencyDataset({{Complex(0, 1), 1.0}, {Complex(0, 1), 2.0}});
            }),
            ErrorKind::duplicate_frequency);
}

TEST(Csv, ReadsSchemaRow) {
  const auto d = parse_csv("omega_rad_s,re,im\n0.0628,1.2,-3.4\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.samples()[0].z, Complex(0.0, 0.0628));
  EXPECT_EQ(d.samples()[0].phi, Complex(1.2, -3.4));
  EXPECT_FALSE(d.conjugate_closed());
}

TEST(Csv, EmptyDataSection) {
  EXPECT_TRUE(parse_csv("omega_rad_s,re,im\n").empty());
  EXPECT_TRUE(parse_csv("omega_rad_s,re,im\n\n").empty());
}

TEST(Csv, ScientificNotation) {
  const auto d = parse_csv("omega_rad_s,re,im\n6.2832e-2, 1E+3 ,-2.5e-7\n");
  EXPECT_EQ(d.samples()[0].phi, Complex(1e3, -2.5e-7));
}

TEST(Csv, ParseErrorNamesLine) {
  try {
    parse_csv("omega_rad_s,re,im\n1,2,3\n2,abc,4\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] { parse_csv("omega,re,im\n1,2,3\n"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_csv("omega_rad_s,re,im\n1,2\n"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_csv("omega_rad_s,re,im\n1,2,3\n1,5,6\n"); }),
            ErrorKind::duplicate_frequency);
}

TEST(Csv, RoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<FrequencySample> s;
  for (int k = 0; k < 50; ++k) s.push_back({Complex(0.0, 0.01 * (k + 1) * 1.37), {u(rng), u(rng) * 1e-9}});
  const FrequencyDataset d(s);
  const auto path = temp_file("roundtrip.csv");
  save_csv(d, path);
  const auto back = load_csv(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    EXPECT_LE(std::abs(back.samples()[k].z - d.samples()[k].z), 1e-15 * std::abs(d.samples()[k].z));
    EXPECT_LE(std::abs(back.samples()[k].phi - d.samples()[k].phi),
              1e-15 * std::abs(d.samples()[k].phi));
  }
}

TEST(Json, RoundTrip) {
  const FrequencyDataset d({{Complex(0, 0.5), {1.0, 2.0}}, {Complex(0, 2.5), {-3.0, 1e-20}}});
  const auto path = temp_file("roundtrip.json");
  save_json(d, path);
  const auto back = load_json(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.samples()[1].phi, Complex(-3.0, 1e-20));
  EXPECT_EQ(kind_of([] { parse_json("{\"a\": 1}"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { parse_json("[{\"omega_rad_s\": 1}]"); }), ErrorKind::parse);
}

TEST(Io, MissingFile) {
  EXPECT_EQ(kind_of([] { load_csv("/nonexistent/dir/x.csv"); }), ErrorKind::io);
}

TEST(CloseConjugate, AddsConjugate) {
  const auto d = close_conjugate(FrequencyDataset({{Complex(0, 1), Complex(2, 1)}}));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_TRUE(d.conjugate_closed());
  EXPECT_EQ(d.samples()[0].z, Complex(0, 1));
  EXPECT_EQ(d.samples()[1].z, Complex(0, -1));
  EXPECT_EQ(d.samples()[1].phi, Complex(2, -1));
}

TEST(CloseConjugate, Idempotent) {
  const auto once = pairs(4);
  const auto twice = close_conjugate(once);
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t k = 0; k < once.size(); ++k) {
    EXPECT_EQ(once.samples()[k].z, twice.samples()[k].z);
    EXPECT_EQ(once.samples()[k].phi, twice.samples()[k].phi);
  }
}

TEST(CloseConjugate, RealPointsStaySingle) {
  const auto d = close_conjugate(FrequencyDataset({{Complex(2, 0), 1.0}, {Complex(0, 1), 1.0}}));
  EXPECT_EQ(d.size(), 3u);
}

TEST(CloseConjugate, Conflict) {
  EXPECT_EQ(kind_of([] {
              close_conjugate(FrequencyDataset({{Complex(0, 1), Complex(2, 1)}, {Complex(0, -1), 5.0}}));
            }),
            ErrorKind::conjugate_conflict);
  // Within 1e-12 relative it is accepted.
  EXPECT_NO_THROW(close_conjugate(
      FrequencyDataset({{Complex(0, 1), Complex(2, 1)}, {Complex(0, -1), Complex(2, -1 + 1e-13)}})));
}

TEST(Partition, FourPairs) {
  const auto p = partition_points(pairs(4));
  ASSERT_EQ(p.mu.size(), 4u);
  ASSERT_EQ(p.lambda.size(), 4u);
  EXPECT_EQ(p.mu[0], Complex(0, 1));
  EXPECT_EQ(p.mu[1], Complex(0, -1));
  EXPECT_EQ(p.mu[2], Complex(0, 3));
  EXPECT_EQ(p.mu[3], Complex(0, -3));
  EXPECT_EQ(p.lambda[0], Complex(0, 2));
  EXPECT_EQ(p.lambda[2], Complex(0, 4));
  EXPECT_EQ(p.v[1], Complex(1, 1));
  EXPECT_EQ(p.mu_blocks, (std::vector<int>{2, 2}));
}

TEST(Partition, TwoPairs) {
  const auto p = partition_points(pairs(2));
  EXPECT_EQ(p.mu, (std::vector<Complex>{{0, 1}, {0, -1}}));
  EXPECT_EQ(p.lambda, (std::vector<Complex>{{0, 2}, {0, -2}}));
}

TEST(Partition, OddPairCount) {
  EXPECT_EQ(kind_of([] { partition_points(pairs(3)); }), ErrorKind::odd_pair_count);
}

TEST(Partition, NeedsClosedData) {
  EXPECT_EQ(kind_of([] { partition_points(FrequencyDataset({{Complex(0, 1), 1.0}})); }),
            ErrorKind::argument);
}

TEST(Partition, DisjointAndExhaustive) {
  const auto d = pairs(10);
  const auto p = partition_points(d);
  std::vector<Complex> all = p.mu;
  all.insert(all.end(), p.lambda.begin(), p.lambda.end());
  EXPECT_EQ(all.size(), d.size());
  for (Complex m : p.mu) {
    for (Complex l : p.lambda) EXPECT_NE(m, l);
  }
  for (const auto& s : d.samples()) {
    EXPECT_NE(std::find(all.begin(), all.end(), s.z), all.end());
  }
  // each side closed under conjugation
  for (Complex m : p.mu) EXPECT_NE(std::find(p.mu.begin(), p.mu.end(), std::conj(m)), p.mu.end());
  for (Complex l : p.lambda) {
    EXPECT_NE(std::find(p.lambda.begin(), p.lambda.end(), std::conj(l)), p.lambda.end());
  }
}
