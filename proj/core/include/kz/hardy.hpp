#pragma once

#include <ostream>
#include <vector>

#include <kz/measures.hpp>
#include <kz/types.hpp>

namespace kz {

// Truncated power series on the open unit disk, evaluated by Horner.
class DiskFunction {
 public:
  DiskFunction() = default;
  explicit DiskFunction(std::vector<Complex> coeffs);

  // throws std::domain_error for |z| >= 1
  Complex eval(Complex z) const;

  const std::vector<Complex>& coeffs() const { return c_; }
  int order() const { return static_cast<int>(c_.size()); }
  Complex coeff(int n) const;

 private:
  std::vector<Complex> c_;
};

// c_n = sum_k a_k b_{n-k}, truncated to `order` terms.
std::vector<Complex> series_multiply(const std::vector<Complex>& a,
                                     const std::vector<Complex>& b, int order);

// Triangular recurrence for num/den with den[0] != 0. Deliberately not
// FFT-based: the recurrence reproduces the coefficient recursions used
// elsewhere digit for digit.
std::vector<Complex> series_divide(const std::vector<Complex>& num,
                                   const std::vector<Complex>& den, int order);

// F(z) = sum_n mu_hat(n) z^n, the Herglotz-normalised transform of mu;
// F(0) = 1 and Re F > 1/2 on the disk.
DiskFunction cauchy_transform(const SpectralMeasure& mu, int order);

// A(z) = lambda / (1 - lambda + lambda F(z)). Its Taylor coefficients equal
// the alpha table for mu and lambda, computed here through generic series
// division as an independent route.
DiskFunction generating_function(const SpectralMeasure& mu, double lambda,
                                 int order);

// phi(z) = (1 - lambda F) / (1 - lambda + lambda F), inner whenever mu is
// singular; at lambda = 1 it reduces to (1 - F)/F.
DiskFunction inner_function(const SpectralMeasure& mu, double lambda,
                            int order);

// Image of f under the lambda-relaxed transform: coefficient n equals
// sum_{j<=n} alpha_{n-j} fhat_j, i.e. the product of the fhat series with A.
DiskFunction lambda_transform(const SpectralMeasure& mu,
                              const std::vector<Complex>& fhat, double lambda,
                              int order);

// The Moebius map w -> (1 - lambda w)/(1 - lambda + lambda w) underlying
// phi = h(F): it sends {Re w = 1/2} onto the circle |z - center| = radius.
struct MobiusData {
  Complex center;  // (lambda-1)/(2-lambda)
  double radius;   // 1/(2-lambda)
};
MobiusData mobius_data(double lambda);
Complex mobius_phi(Complex w, double lambda);

// Boundary comparison at several radii: the trapezoid mean of |A - lambda|^2
// on |z| = r (exact for the truncated series once the node count exceeds
// twice the order), the finite Parseval sum sum_{n>=1} |alpha_n|^2 r^{2n},
// and the coefficient sum at r = 1 against the effectiveness target
// lambda^3/(2-lambda).
struct RadiusComparison {
  double radius = 0.0;
  double quadrature = 0.0;
  double parseval = 0.0;
};
struct BoundaryComparison {
  double lambda = 0.0;
  double coefficient_sum = 0.0;  // sum_{n>=1} |alpha_n|^2
  double target = 0.0;           // lambda^3/(2-lambda)
  int nodes = 0;
  std::vector<RadiusComparison> radii;
};
BoundaryComparison coefficient_sum_vs_boundary(const SpectralMeasure& mu,
                                               double lambda, int order,
                                               const std::vector<double>& radii,
                                               int min_nodes = 2048);

// CSV: r, theta, re, im, modulus over a polar grid of the truncated series.
void write_grid_csv(std::ostream& out, const DiskFunction& f,
                    const std::vector<double>& radii, int angles);

}  // namespace kz
