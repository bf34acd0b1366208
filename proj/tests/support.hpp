#pragma once

// Test-side oracles: systems built from explicit poles and residues, so their
// transfer values never go through the library.

#include <complex>
#include <random>
#include <vector>

#include "loewner_lab/descriptor.hpp"

namespace loewner_lab::testing {

/// sum_k res_k / (s - pole_k) + d with conjugate-closed poles/residues.
struct PoleResidueSystem {
  std::vector<Complex> poles;
  std::vector<Complex> residues;
  double d = 0.0;

  Complex operator()(Complex s) const {
    Complex out = d;
    for (std::size_t k = 0; k < poles.size(); ++k) out += residues[k] / (s - poles[k]);
    return out;
  }

  TransferMap transfer() const {
    const PoleResidueSystem self = *this;
    return TransferMap([self](Complex s) { return self(s); }, "pole-residue");
  }

  /// Real block-diagonal realization (E = I).
  DescriptorRealization realization() const {
    const auto n = static_cast<Eigen::Index>(poles.size());
    DescriptorRealization r;
    r.E = Matrix::Identity(n, n);
    r.A = Matrix::Zero(n, n);
    r.B = Vector::Zero(n);
    r.C = RowVector::Zero(n);
    r.D = d;
    Eigen::Index k = 0;
    while (k < n) {
      const Complex p = poles[static_cast<std::size_t>(k)];
      const Complex c = residues[static_cast<std::size_t>(k)];
      if (p.imag() == 0.0) {
        r.A(k, k) = p.real();
        r.B(k) = 1.0;
        r.C(k) = c.real();
        k += 1;
      } else {
        // c/(s-p) + conj(c)/(s-conj p) with A = [[a, b], [-b, a]].
        r.A(k, k) = p.real();
        r.A(k, k + 1) = p.imag();
        r.A(k + 1, k) = -p.imag();
        r.A(k + 1, k + 1) = p.real();
        r.B(k) = 0.0;
        r.B(k + 1) = 1.0;
        // (s - A)^{-1} e2 = [b, s - a] / ((s-a)^2 + b^2); match residues.
        r.C(k) = -2.0 * c.imag();
        r.C(k + 1) = 2.0 * c.real();
        k += 2;
      }
    }
    return r;
  }
};

/// Random real system of the given order. Real parts of the poles are drawn
/// from [re_min, re_max]; residues have modulus in [res_min, 1].
inline PoleResidueSystem random_system(std::mt19937_64& rng, int order, double re_min,
                                       double re_max, double res_min = 0.1) {
  std::uniform_real_distribution<double> re(re_min, re_max);
  std::uniform_real_distribution<double> im(0.2, 5.0);
  std::uniform_real_distribution<double> mag(res_min, 1.0);
  std::uniform_real_distribution<double> arg(-3.14159, 3.14159);
  std::bernoulli_distribution sign(0.5);
  PoleResidueSystem sys;
  int left = order;
  while (left > 0) {
    if (left >= 2 && sign(rng)) {
      const Complex p(re(rng), im(rng));
      const Complex c = std::polar(mag(rng), arg(rng));
      sys.poles.push_back(p);
      sys.residues.push_back(c);
      sys.poles.push_back(std::conj(p));
      sys.residues.push_back(std::conj(c));
      left -= 2;
    } else {
      sys.poles.emplace_back(re(rng), 0.0);
      sys.residues.emplace_back(sign(rng) ? mag(rng) : -mag(rng), 0.0);
      left -= 1;
    }
  }
  return sys;
}

inline double rel_err(Complex a, Complex b) {
  const double scale = std::max(std::abs(b), 1e-300);
  return std::abs(a - b) / scale;
}

}  // namespace loewner_lab::testing
