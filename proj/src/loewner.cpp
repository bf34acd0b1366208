#include "loewner_lab/loewner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "loewner_lab/error.hpp"
#include "loewner_lab/simd/kernels.hpp"

namespace loewner_lab {

namespace {

struct ThinSvd {
  Matrix U;
  Matrix V;
  Vector sigma;
};

// BDCSVD occasionally returns non-finite vectors on small, nearly rank
// deficient inputs; fall back to the one-sided Jacobi method there.
ThinSvd thin_svd(const Matrix& a, unsigned int options) {
  const Eigen::BDCSVD<Matrix> fast(a, options);
  ThinSvd out;
  if (options & Eigen::ComputeThinU) out.U = fast.matrixU();
  if (options & Eigen::ComputeThinV) out.V = fast.matrixV();
  out.sigma = fast.singularValues();
  if (out.U.allFinite() && out.V.allFinite() && out.sigma.allFinite()) return out;
  const Eigen::JacobiSVD<Matrix> slow(a, options);
  if (options & Eigen::ComputeThinU) out.U = slow.matrixU();
  if (options & Eigen::ComputeThinV) out.V = slow.matrixV();
  out.sigma = slow.singularValues();
  return out;
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Rows of each conjugate block (a, conj a) -> J^H rows with
// J = [[1, -i], [1, i]] / sqrt(2).
void transform_rows(CMatrix& M, const std::vector<int>& blocks) {
  Eigen::Index r = 0;
  for (int b : blocks) {
    if (b == 2) {
      const CMatrix top = M.row(r);
      const CMatrix bot = M.row(r + 1);
      M.row(r) = (top + bot) * kInvSqrt2;
      M.row(r + 1) = (top - bot) * Complex(0.0, kInvSqrt2);
    }
    r += b;
  }
}

void transform_cols(CMatrix& M, const std::vector<int>& blocks) {
  Eigen::Index c = 0;
  for (int b : blocks) {
    if (b == 2) {
      const CMatrix left = M.col(c);
      const CMatrix right = M.col(c + 1);
      M.col(c) = (left + right) * kInvSqrt2;
      M.col(c + 1) = (right - left) * Complex(0.0, kInvSqrt2);
    }
    c += b;
  }
}

int count_above(const Eigen::VectorXd& sv, double tol) {
  if (sv.size() == 0) return 0;
  const double cut = tol * sv(0);
  int r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cut) ++r;
  }
  return r;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

LoewnerPencil build_pencil(const PointPartition& p) {
  const auto m = static_cast<Eigen::Index>(p.mu.size());
  const auto n = static_cast<Eigen::Index>(p.lambda.size());
  if (p.v.size() != p.mu.size() || p.w.size() != p.lambda.size()) {
    throw Error(ErrorKind::argument, "partition points and responses differ in length");
  }
  for (Complex mu : p.mu) {
    for (Complex lam : p.lambda) {
      if (mu == lam) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "left and right points coincide at " << mu;
        throw Error(ErrorKind::coincident_point, msg.str());
      }
    }
  }
  LoewnerPencil pen;
  pen.partition = p;
  pen.Lw.resize(m, n);
  pen.Ls.resize(m, n);
  simd::LoewnerFillArgs args;
  args.mu = p.mu;
  args.v = p.v;
  args.lambda = p.lambda;
  args.w = p.w;
  args.loewner = pen.Lw.data();
  args.shifted = pen.Ls.data();
  args.ld = m;
  simd::loewner_fill(args);
  return pen;
}

LoewnerModel::LoewnerModel(const LoewnerPencil& pen, bool diagnostics) {
  const auto& part = pen.partition;
  CMatrix L = pen.Lw;
  CMatrix Ls = pen.Ls;
  CMatrix v = Eigen::Map<const CVector>(part.v.data(), static_cast<Eigen::Index>(part.v.size()));
  CMatrix w = Eigen::Map<const Eigen::RowVectorXcd>(part.w.data(),
                                                    static_cast<Eigen::Index>(part.w.size()));
  transform_rows(L, part.mu_blocks);
  transform_rows(Ls, part.mu_blocks);
  transform_rows(v, part.mu_blocks);
  transform_cols(L, part.lambda_blocks);
  transform_cols(Ls, part.lambda_blocks);
  transform_cols(w, part.lambda_blocks);
  Lr_ = L.real();
  Lsr_ = Ls.real();
  v_ = v.real();
  w_ = w.real();

  const auto m = Lr_.rows();
  const auto n = Lr_.cols();
  Matrix wide(m, 2 * n);
  wide << Lr_, Lsr_;
  Matrix tall(2 * m, n);
  tall << Lr_, Lsr_;
  ThinSvd svd_wide = thin_svd(wide, Eigen::ComputeThinU);
  ThinSvd svd_tall = thin_svd(tall, Eigen::ComputeThinV);
  Y_ = std::move(svd_wide.U);
  X_ = std::move(svd_tall.V);
  sv_row_ = std::move(svd_wide.sigma);
  sv_col_ = std::move(svd_tall.sigma);

  if (!diagnostics) return;
  sv_loewner_ = thin_svd(Lr_, 0).sigma;
  if (!part.mu.empty()) {
    pencil_probe_ = part.mu.front();
    const CMatrix zp = pencil_probe_ * Lr_.cast<Complex>() - Lsr_.cast<Complex>();
    sv_pencil_ = to_std(Eigen::BDCSVD<CMatrix>(zp).singularValues());
  }
}

RankReport LoewnerModel::rank(double tol) const {
  if (!(tol > 0.0 && tol < 1.0)) throw Error(ErrorKind::argument, "rank tolerance must be in (0, 1)");
  if (sv_row_.size() == 0 || sv_row_(0) == 0.0) {
    throw Error(ErrorKind::zero_matrix, "Loewner pencil is identically zero");
  }
  RankReport rep;
  rep.tol = tol;
  rep.sv_row = to_std(sv_row_);
  rep.sv_col = to_std(sv_col_);
  rep.sv_loewner = to_std(sv_loewner_);
  rep.sv_pencil = sv_pencil_;
  rep.pencil_probe = pencil_probe_;
  rep.rank_row = count_above(sv_row_, tol);
  rep.rank_col = count_above(sv_col_, tol);
  rep.rank_loewner = count_above(sv_loewner_, tol);
  if (sv_loewner_.size() > 0 && sv_loewner_(0) <= tol * sv_row_(0)) rep.rank_loewner = 0;
  rep.rank_pencil = count_above(Eigen::Map<const Eigen::VectorXd>(
                                    sv_pencil_.data(), static_cast<Eigen::Index>(sv_pencil_.size())),
                                tol);
  rep.consistent = rep.rank_row == rep.rank_col;
  rep.rank = std::max(rep.rank_row, rep.rank_col);
  return rep;
}

DescriptorRealization LoewnerModel::realization(int r) const {
  const auto m = Lr_.rows();
  if (r < 1 || r > m) {
    throw Error(ErrorKind::argument,
                "order " + std::to_string(r) + " outside [1, " + std::to_string(m) + "]");
  }
  const auto Y = Y_.leftCols(r);
  const auto X = X_.leftCols(r);
  DescriptorRealization rlz;
  rlz.E = -Y.transpose() * Lr_ * X;
  rlz.A = -Y.transpose() * Lsr_ * X;
  rlz.B = Y.transpose() * v_;
  rlz.C = w_ * X;
  rlz.D = 0.0;
  if (!rlz.is_regular()) {
    throw Error(ErrorKind::singular_pencil,
                "projected pencil of order " + std::to_string(r) + " is not regular");
  }
  return rlz;
}

RankReport detect_rank(const LoewnerPencil& pen, double tol) {
  return LoewnerModel(pen).rank(tol);
}

DescriptorRealization reduce_to_realization(const LoewnerPencil& pen, int r) {
  return LoewnerModel(pen).realization(r);
}

std::vector<double> interpolation_residuals(const DescriptorRealization& rlz,
                                            const FrequencyDataset& d) {
  const std::vector<Complex> pts = d.points();
  const std::vector<Complex> fit = eval_transfer(rlz, pts);
  std::vector<double> out(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Complex phi = d.samples()[k].phi;
    const double err = std::abs(fit[k] - phi);
    out[k] = std::abs(phi) > 0.0 ? err / std::abs(phi) : err;
  }
  return out;
}

LoewnerPencil pencil_from_data(const FrequencyDataset& d) {
  return build_pencil(partition_points(d.conjugate_closed() ? d : close_conjugate(d)));
}

}  // namespace loewner_lab
