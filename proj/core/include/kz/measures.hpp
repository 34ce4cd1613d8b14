#pragma once

#include <cstdint>
#include <vector>

#include <kz/types.hpp>

namespace kz {

enum class MeasureKind { atomic, cantor, lebesgue };

// Point on the circle [0,1). Locations given as p/q are kept exact so the
// phase of e^{-2 pi i n x} can be reduced mod 1 without drift at large n.
struct AtomLocation {
  std::int64_t num = 0;
  std::int64_t den = 0;  // den > 0 marks the exact representation
  double value = 0.0;

  static AtomLocation rational(std::int64_t p, std::int64_t q);
  static AtomLocation real(double x);
  bool exact() const { return den > 0; }
};

struct Atom {
  AtomLocation x;
  double weight = 0.0;
};

// Probability measure on the circle, one of three families:
//   atomic    - finitely many atoms, weights summing to 1
//   cantor    - middle-thirds Cantor measure, moments via the product formula
//   lebesgue  - normalised arc length
class SpectralMeasure {
 public:
  static SpectralMeasure atomic(std::vector<Atom> atoms);
  static SpectralMeasure lebesgue();
  static SpectralMeasure cantor(int depth = 64);

  MeasureKind kind() const { return kind_; }
  bool singular() const { return kind_ != MeasureKind::lebesgue; }

  // Fourier-Stieltjes coefficient mu_hat(n) = integral of e^{-2 pi i n x}.
  Complex moment(std::int64_t n) const;

  const std::vector<Atom>& atoms() const;  // atomic only
  int cantor_depth() const;                // cantor only

 private:
  SpectralMeasure() = default;
  MeasureKind kind_ = MeasureKind::lebesgue;
  std::vector<Atom> atoms_;
  int depth_ = 0;
};

// Uniformly random atomic measure with `count` atoms: locations uniform on
// [0,1), weights from normalised uniforms. Handy for randomised tests.
class Rng;
SpectralMeasure random_atomic_measure(Rng& rng, int count);

// Finite section of L^2(mu) for atomic mu, spanned by the exponentials
// e_n(x) = e^{2 pi i n x}, n = 0..order-1. A function is stored by its
// values at the atoms; the inner product is the weighted dot product,
// conjugate-linear in the FIRST argument:
//   <f, g> = sum_j w_j conj(f_j) g_j.
class L2Embedding {
 public:
  L2Embedding(const SpectralMeasure& mu, int order);

  int dim() const { return static_cast<int>(weights_.size()); }
  int order() const { return static_cast<int>(exp_.cols()); }
  const RealVector& weights() const { return weights_; }
  const ComplexOperator& exp_matrix() const { return exp_; }

  // values of e_n at the atoms
  ComplexVector basis(int n) const;

  Complex inner_product(const ComplexVector& f, const ComplexVector& g) const;
  double norm_sq(const ComplexVector& f) const;
  double norm(const ComplexVector& f) const;

  // isometry onto standard C^m: f -> sqrt(w) .* f
  ComplexVector unit_coordinates(const ComplexVector& f) const;
  // sqrt(w) .* e_n, a unit vector of standard C^m
  ComplexVector unit_basis(int n) const;

  // <e_s, e_i>, equals mu_hat(s - i) by stationarity
  Complex gram(int s, int i) const;

 private:
  RealVector weights_;
  ComplexOperator exp_;  // dim x order, column n holds e_n
};

inline L2Embedding exponential_system(const SpectralMeasure& mu, int order) {
  return L2Embedding(mu, order);
}

}  // namespace kz
