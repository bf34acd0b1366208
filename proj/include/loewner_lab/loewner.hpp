#pragma once

#include <vector>

#include "loewner_lab/descriptor.hpp"
#include "loewner_lab/freq_data.hpp"
#include "loewner_lab/types.hpp"

namespace loewner_lab {

struct LoewnerPencil {
  CMatrix Lw;  // (v_i - w_j) / (mu_i - lambda_j)
  CMatrix Ls;  // (mu_i v_i - lambda_j w_j) / (mu_i - lambda_j)
  PointPartition partition;
};

/// Throws coincident-point if some mu_i equals some lambda_j.
LoewnerPencil build_pencil(const PointPartition& p);

struct RankReport {
  std::vector<double> sv_row;     // [Lw Ls]
  std::vector<double> sv_col;     // [Lw; Ls]
  std::vector<double> sv_pencil;  // z Lw - Ls at the probe point below
  Complex pencil_probe;
  std::vector<double> sv_loewner;  // Lw alone
  int rank_row = 0;
  int rank_col = 0;
  int rank_pencil = 0;
  int rank_loewner = 0;
  int rank = 0;  // max(rank_row, rank_col)
  double tol = 0.0;
  bool consistent = true;  // row and column ranks agree
};

/// Real form of a pencil plus the singular factors needed to project it.
/// Factorizes once; realizations of any order are cheap afterwards.
class LoewnerModel {
 public:
  /// `diagnostics` adds the singular values of Lw alone and of z Lw - Ls at
  /// one data point to the rank report (two extra decompositions).
  explicit LoewnerModel(const LoewnerPencil& pen, bool diagnostics = true);

  /// Counts singular values above tol * sigma_max. Throws zero-matrix when
  /// the pencil is identically zero.
  RankReport rank(double tol = 1e-10) const;

  /// Order-r projection. Throws argument when r is out of [1, m] and
  /// singular-pencil when (E, A) is not regular.
  DescriptorRealization realization(int r) const;

  int size() const { return static_cast<int>(Lr_.rows()); }

  /// Realness-transformed matrices (real by construction).
  const Matrix& loewner_real() const { return Lr_; }
  const Matrix& shifted_real() const { return Lsr_; }

 private:
  Matrix Lr_;
  Matrix Lsr_;
  Vector v_;
  RowVector w_;
  Matrix Y_;  // left singular vectors of [Lr Lsr]
  Matrix X_;  // right singular vectors of [Lr; Lsr]
  Vector sv_row_;
  Vector sv_col_;
  Eigen::VectorXd sv_loewner_;
  std::vector<double> sv_pencil_;
  Complex pencil_probe_;
};

RankReport detect_rank(const LoewnerPencil& pen, double tol = 1e-10);

DescriptorRealization reduce_to_realization(const LoewnerPencil& pen, int r);

/// Per-point relative error |H(z_i) - phi_i| / |phi_i| (absolute when
/// phi_i = 0).
std::vector<double> interpolation_residuals(const DescriptorRealization& rlz,
                                            const FrequencyDataset& d);

/// Convenience: close, partition and build.
LoewnerPencil pencil_from_data(const FrequencyDataset& d);

}  // namespace loewner_lab
