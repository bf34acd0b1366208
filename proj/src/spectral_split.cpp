#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "loewner_lab/descriptor.hpp"
#include "loewner_lab/error.hpp"

namespace loewner_lab {

namespace {

DescriptorRealization zero_realization() { return DescriptorRealization::gain(0.0); }

// Swaps the adjacent diagonal entries i, i+1 of the upper triangular T.
void swap_adjacent(CMatrix& T, CMatrix& Q, Eigen::Index i) {
  const Complex a = T(i, i);
  const Complex b = T(i, i + 1);
  const Complex c = T(i + 1, i + 1);
  Complex x1 = b;
  Complex x2 = c - a;
  const double nrm = std::hypot(std::abs(x1), std::abs(x2));
  if (nrm == 0.0) return;
  x1 /= nrm;
  x2 /= nrm;
  Eigen::Matrix2cd G;
  G << x1, -std::conj(x2), x2, std::conj(x1);
  T.middleCols(i, 2) = T.middleCols(i, 2) * G;
  T.middleRows(i, 2) = G.adjoint() * T.middleRows(i, 2);
  Q.middleCols(i, 2) = Q.middleCols(i, 2) * G;
  T(i + 1, i) = 0.0;
}

Matrix leading_basis(const Matrix& P, Eigen::Index k) {
  Eigen::ColPivHouseholderQR<Matrix> qr(P);
  Matrix Qfull = qr.householderQ();
  return Qfull.leftCols(k);
}

}  // namespace

SpectralParts spectral_split(const DescriptorRealization& rlz,
                             const std::function<bool(Complex)>& select) {
  rlz.check_dimensions();
  const auto n = rlz.order();
  if (n == 0) return {zero_realization(), rlz};

  Eigen::FullPivLU<Matrix> e_lu(rlz.E);
  if (!e_lu.isInvertible()) {
    throw Error(ErrorKind::singular_pencil,
                "spectral splitting needs an invertible E (index-0 pencil)");
  }
  const Matrix A = e_lu.solve(rlz.A);
  const Vector B = e_lu.solve(rlz.B);

  Eigen::ComplexSchur<CMatrix> schur(A.cast<Complex>());
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::evaluation, "Schur decomposition did not converge");
  }
  CMatrix T = schur.matrixT();
  CMatrix Q = schur.matrixU();

  std::vector<bool> chosen(static_cast<std::size_t>(n));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    chosen[static_cast<std::size_t>(i)] = select(T(i, i));
    if (chosen[static_cast<std::size_t>(i)]) ++k;
  }
  if (k == 0) return {zero_realization(), rlz};
  if (k == n) {
    DescriptorRealization all = rlz;
    all.D = 0.0;
    return {all, DescriptorRealization::gain(rlz.D)};
  }

  // Bubble the selected eigenvalues to the leading block.
  Eigen::Index filled = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!chosen[static_cast<std::size_t>(j)]) continue;
    for (Eigen::Index i = j; i > filled; --i) {
      swap_adjacent(T, Q, i - 1);
      std::swap(chosen[static_cast<std::size_t>(i)], chosen[static_cast<std::size_t>(i - 1)]);
    }
    ++filled;
  }

  // T11 X - X T22 = -T12, column by column (both blocks upper triangular).
  const Eigen::Index m = n - k;
  const CMatrix T11 = T.topLeftCorner(k, k);
  const CMatrix T22 = T.bottomRightCorner(m, m);
  CMatrix X(k, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    CVector rhs = -T.block(0, k + j, k, 1);
    for (Eigen::Index l = 0; l < j; ++l) rhs += X.col(l) * T22(l, j);
    CMatrix shifted = T11;
    shifted.diagonal().array() -= T22(j, j);
    X.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }

  CMatrix Pschur = CMatrix::Zero(n, n);
  Pschur.topLeftCorner(k, k).setIdentity();
  Pschur.topRightCorner(k, m) = -X;
  const Matrix P = (Q * Pschur * Q.adjoint()).real();
  const Matrix Pc = Matrix::Identity(n, n) - P;

  auto project = [&](const Matrix& proj, Eigen::Index dim) {
    const Matrix V = leading_basis(proj, dim);
    const Matrix Z = leading_basis(proj.transpose(), dim);
    DescriptorRealization part;
    part.E = Z.transpose() * V;
    part.A = Z.transpose() * A * V;
    part.B = Z.transpose() * B;
    part.C = rlz.C * V;
    part.D = 0.0;
    return part;
  };

  SpectralParts out{project(P, k), project(Pc, m)};
  out.rest.D = rlz.D;
  return out;
}

StableSplit stable_antistable_split(const DescriptorRealization& rlz) {
  auto antistable = [](Complex lambda) {
    if (std::abs(lambda.real()) < kImagAxisGuard) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "pole " << lambda.real() << (lambda.imag() < 0 ? "-" : "+")
          << std::abs(lambda.imag()) << "i lies within " << kImagAxisGuard
          << " of the imaginary axis";
      throw Error(ErrorKind::boundary_pole, msg.str());
    }
    return lambda.real() >= 0.0;
  };
  SpectralParts parts = spectral_split(rlz, antistable);
  return {std::move(parts.rest), std::move(parts.selected)};
}

}  // namespace loewner_lab
