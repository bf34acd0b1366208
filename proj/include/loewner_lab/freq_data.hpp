#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "loewner_lab/descriptor.hpp"
#include "loewner_lab/types.hpp"

namespace loewner_lab {

struct FrequencySample {
  Complex z;
  Complex phi;
};

/// Ordered samples with pairwise distinct points.
class FrequencyDataset {
 public:
  FrequencyDataset() = default;
  /// Throws duplicate-frequency if two points coincide, argument on
  /// non-finite values.
  explicit FrequencyDataset(std::vector<FrequencySample> samples, bool conjugate_closed = false);

  const std::vector<FrequencySample>& samples() const { return samples_; }
  bool conjugate_closed() const { return conjugate_closed_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  std::vector<Complex> points() const;
  std::vector<Complex> values() const;

 private:
  std::vector<FrequencySample> samples_;
  bool conjugate_closed_ = false;
};

/// Left/right interpolation points. Conjugate pairs are adjacent; block
/// sizes (1 for real points, 2 for pairs) describe the grouping.
struct PointPartition {
  std::vector<Complex> mu;
  std::vector<Complex> lambda;
  std::vector<Complex> v;  // responses at mu
  std::vector<Complex> w;  // responses at lambda
  std::vector<int> mu_blocks;
  std::vector<int> lambda_blocks;
};

/// Adds (conj z, conj phi) right after every off-axis sample that lacks it.
/// Throws conjugate-conflict when a present conjugate disagrees beyond 1e-12
/// relative.
FrequencyDataset close_conjugate(const FrequencyDataset& d);

/// Alternates conjugate groups between mu and lambda. Requires a closed set
/// with an even number of groups (odd-pair-count otherwise).
PointPartition partition_points(const FrequencyDataset& d);

/// Samples h at i*omega for every omega (parallel), conjugate_closed = false.
FrequencyDataset sample_transfer(const TransferMap& h, std::span<const double> omegas);

/// Frequencies (Im z) of a dataset whose points lie on the positive
/// imaginary axis, in file order.
std::vector<double> omegas_of(const FrequencyDataset& d);

// On-disk format: header `omega_rad_s,re,im`, one sample per line, points on
// the imaginary axis.
FrequencyDataset load_csv(const std::filesystem::path& path);
FrequencyDataset parse_csv(const std::string& text);
void save_csv(const FrequencyDataset& d, const std::filesystem::path& path);
std::string to_csv(const FrequencyDataset& d);

FrequencyDataset load_json(const std::filesystem::path& path);
FrequencyDataset parse_json(const std::string& text);
void save_json(const FrequencyDataset& d, const std::filesystem::path& path);

}  // namespace loewner_lab
