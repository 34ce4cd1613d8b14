#include <kz/hardy.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <kz/io.hpp>

namespace kz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0 && lambda < 2.0)) {
    throw std::invalid_argument(std::string(who) + ": lambda must lie in (0,2)");
  }
}

// 1 - lambda + lambda F as a coefficient vector; the constant term is
// exactly 1 because mu_hat(0) = 1, so it is written down rather than summed
std::vector<Complex> shifted_denominator(const SpectralMeasure& mu,
                                         double lambda, int order) {
  std::vector<Complex> den(order);
  den[0] = Complex(1.0, 0.0);
  for (int n = 1; n < order; ++n) den[n] = lambda * mu.moment(n);
  return den;
}

}  // namespace

DiskFunction::DiskFunction(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) throw std::invalid_argument("DiskFunction: empty series");
}

Complex DiskFunction::eval(Complex z) const {
  if (std::abs(z) >= 1.0) {
    throw std::domain_error("DiskFunction::eval: |z| must be < 1");
  }
  Complex acc(0.0, 0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex DiskFunction::coeff(int n) const {
  if (n < 0 || n >= order()) throw std::out_of_range("DiskFunction::coeff");
  return c_[static_cast<std::size_t>(n)];
}

std::vector<Complex> series_multiply(const std::vector<Complex>& a,
                                     const std::vector<Complex>& b, int order) {
  if (order < 1) throw std::invalid_argument("series_multiply: order < 1");
  std::vector<Complex> c(order, Complex(0.0, 0.0));
  for (int i = 0; i < static_cast<int>(a.size()) && i < order; ++i) {
    for (int j = 0; j < static_cast<int>(b.size()) && i + j < order; ++j) {
      c[i + j] += a[i] * b[j];
    }
  }
  return c;
}

std::vector<Complex> series_divide(const std::vector<Complex>& num,
                                   const std::vector<Complex>& den, int order) {
  if (order < 1) throw std::invalid_argument("series_divide: order < 1");
  if (den.empty() || den[0] == Complex(0.0, 0.0)) {
    throw std::invalid_argument("series_divide: denominator must have c_0 != 0");
  }
  std::vector<Complex> q(order, Complex(0.0, 0.0));
  for (int n = 0; n < order; ++n) {
    Complex acc = n < static_cast<int>(num.size()) ? num[n] : Complex(0.0, 0.0);
    for (int k = 1; k <= n && k < static_cast<int>(den.size()); ++k) {
      acc -= den[k] * q[n - k];
    }
    q[n] = acc / den[0];
  }
  return q;
}

DiskFunction cauchy_transform(const SpectralMeasure& mu, int order) {
  if (order < 1) throw std::invalid_argument("cauchy_transform: order < 1");
  std::vector<Complex> c(order);
  for (int n = 0; n < order; ++n) c[n] = mu.moment(n);
  return DiskFunction(std::move(c));
}

DiskFunction generating_function(const SpectralMeasure& mu, double lambda,
                                 int order) {
  check_lambda(lambda, "generating_function");
  if (order < 1) throw std::invalid_argument("generating_function: order < 1");
  const std::vector<Complex> num{Complex(lambda, 0.0)};
  return DiskFunction(
      series_divide(num, shifted_denominator(mu, lambda, order), order));
}

DiskFunction inner_function(const SpectralMeasure& mu, double lambda,
                            int order) {
  check_lambda(lambda, "inner_function");
  if (order < 1) throw std::invalid_argument("inner_function: order < 1");
  // 1 - lambda F, constant term written exactly as 1 - lambda
  std::vector<Complex> num(order);
  num[0] = Complex(1.0 - lambda, 0.0);
  for (int n = 1; n < order; ++n) num[n] = -lambda * mu.moment(n);
  return DiskFunction(
      series_divide(num, shifted_denominator(mu, lambda, order), order));
}

DiskFunction lambda_transform(const SpectralMeasure& mu,
                              const std::vector<Complex>& fhat, double lambda,
                              int order) {
  check_lambda(lambda, "lambda_transform");
  if (fhat.empty()) throw std::invalid_argument("lambda_transform: empty fhat");
  const DiskFunction a = generating_function(mu, lambda, order);
  return DiskFunction(series_multiply(fhat, a.coeffs(), order));
}

MobiusData mobius_data(double lambda) {
  check_lambda(lambda, "mobius_data");
  return MobiusData{Complex((lambda - 1.0) / (2.0 - lambda), 0.0),
                    1.0 / (2.0 - lambda)};
}

Complex mobius_phi(Complex w, double lambda) {
  check_lambda(lambda, "mobius_phi");
  return (1.0 - lambda * w) / (1.0 - lambda + lambda * w);
}

BoundaryComparison coefficient_sum_vs_boundary(const SpectralMeasure& mu,
                                               double lambda, int order,
                                               const std::vector<double>& radii,
                                               int min_nodes) {
  check_lambda(lambda, "coefficient_sum_vs_boundary");
  if (order < 2) throw std::invalid_argument("coefficient_sum_vs_boundary: order < 2");
  for (const double r : radii) {
    if (!(r > 0.0 && r < 1.0)) {
      throw std::invalid_argument("coefficient_sum_vs_boundary: radius outside (0,1)");
    }
  }
  const DiskFunction a = generating_function(mu, lambda, order);

  BoundaryComparison cmp;
  cmp.lambda = lambda;
  cmp.target = lambda * lambda * lambda / (2.0 - lambda);
  for (int n = 1; n < order; ++n) cmp.coefficient_sum += std::norm(a.coeff(n));

  // enough nodes that the trapezoid rule is exact for the trig polynomial
  // |A_trunc - lambda|^2, whose frequencies run to order-1
  int nodes = min_nodes < 16 ? 16 : min_nodes;
  while (nodes < 2 * order) nodes *= 2;
  cmp.nodes = nodes;

  // A - lambda drops the constant term
  std::vector<Complex> shifted = a.coeffs();
  shifted[0] -= lambda;
  const DiskFunction a_shift(std::move(shifted));

  for (const double r : radii) {
    RadiusComparison rc;
    rc.radius = r;
    double quad = 0.0;
    for (int m = 0; m < nodes; ++m) {
      const double theta = kTwoPi * static_cast<double>(m) / nodes;
      const Complex z = r * Complex(std::cos(theta), std::sin(theta));
      quad += std::norm(a_shift.eval(z));
    }
    rc.quadrature = quad / nodes;
    double parseval = 0.0;
    const double r2 = r * r;
    double pw = 1.0;
    for (int n = 1; n < order; ++n) {
      pw *= r2;
      parseval += std::norm(a.coeff(n)) * pw;
    }
    rc.parseval = parseval;
    cmp.radii.push_back(rc);
  }
  return cmp;
}

void write_grid_csv(std::ostream& out, const DiskFunction& f,
                    const std::vector<double>& radii, int angles) {
  if (angles < 1) throw std::invalid_argument("write_grid_csv: angles < 1");
  out << "r,theta,re,im,modulus\n";
  for (const double r : radii) {
    for (int m = 0; m < angles; ++m) {
      const double theta = kTwoPi * static_cast<double>(m) / angles;
      const Complex z = r * Complex(std::cos(theta), std::sin(theta));
      const Complex v = f.eval(z);
      out << format_double(r) << ',' << format_double(theta) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << ','
          << format_double(std::abs(v)) << '\n';
    }
  }
}

}  // namespace kz
