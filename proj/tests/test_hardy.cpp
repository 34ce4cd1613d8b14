#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <kz/coefficients.hpp>
#include <kz/hardy.hpp>
#include <kz/measures.hpp>
#include <kz/random.hpp>

#include "test_util.hpp"

using namespace kz;

TEST_SUITE("hardy") {

TEST_CASE("series arithmetic against hand expansions") {
  // (1 + z)(1 - z) = 1 - z^2
  const std::vector<Complex> a{Complex(1, 0), Complex(1, 0)};
  const std::vector<Complex> b{Complex(1, 0), Complex(-1, 0)};
  const auto prod = series_multiply(a, b, 4);
  CHECK(prod[0] == Complex(1, 0));
  CHECK(prod[1] == Complex(0, 0));
  CHECK(prod[2] == Complex(-1, 0));
  CHECK(prod[3] == Complex(0, 0));

  // 1 / (1 - z) = 1 + z + z^2 + ...
  const auto geo = series_divide({Complex(1, 0)}, b, 6);
  for (const Complex& c : geo) CHECK(c == Complex(1, 0));

  // division inverts multiplication for random series
  Rng rng(801);
  std::vector<Complex> num(8), den(8);
  for (auto& c : num) c = Complex(rng.gaussian(), rng.gaussian());
  for (auto& c : den) c = Complex(rng.gaussian(), rng.gaussian());
  den[0] = Complex(1.0, 0.5);  // keep it invertible
  const auto q = series_divide(num, den, 8);
  const auto back = series_multiply(q, den, 8);
  for (int n = 0; n < 8; ++n) CHECK(std::abs(back[n] - num[n]) <= 1e-12);

  CHECK_THROWS_AS(series_divide(num, {Complex(0, 0), Complex(1, 0)}, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiskFunction(std::vector<Complex>{}), std::invalid_argument);
}

TEST_CASE("evaluation is Horner on the open disk only") {
  const DiskFunction f({Complex(1, 0), Complex(2, 0), Complex(3, 0)});
  const Complex z(0.2, 0.1);
  CHECK(std::abs(f.eval(z) - (Complex(1, 0) + z * (Complex(2, 0) + z * Complex(3, 0)))) <=
        1e-15);
  CHECK_THROWS_AS(f.eval(Complex(1.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(f.eval(Complex(0.8, 0.7)), std::domain_error);
  CHECK_THROWS_AS(f.coeff(3), std::out_of_range);
}

TEST_CASE("transform of lebesgue is constant 1") {
  const DiskFunction f = cauchy_transform(SpectralMeasure::lebesgue(), 16);
  CHECK(f.coeff(0) == Complex(1.0, 0.0));
  for (int n = 1; n < 16; ++n) CHECK(f.coeff(n) == Complex(0.0, 0.0));
}

TEST_CASE("two-atom transform is the geometric series in z^2") {
  const DiskFunction f = cauchy_transform(kz::test::two_atom_measure(), 12);
  for (int n = 0; n < 12; ++n) {
    const double expect = n % 2 == 0 ? 1.0 : 0.0;
    CHECK(std::abs(f.coeff(n) - Complex(expect, 0.0)) <= 1e-15);
  }
  // so F(z) = 1/(1-z^2) pointwise, once the truncation tail is negligible
  const DiskFunction flong = cauchy_transform(kz::test::two_atom_measure(), 96);
  const Complex z(0.3, 0.4);
  CHECK(std::abs(flong.eval(z) - 1.0 / (1.0 - z * z)) <= 1e-10);
}

TEST_CASE("Re F > 1/2 inside the disk") {
  Rng rng(809);
  for (int trial = 0; trial < 4; ++trial) {
    const SpectralMeasure mu = random_atomic_measure(rng, 2 + trial);
    const DiskFunction f = cauchy_transform(mu, 512);
    for (int j = 0; j < 64; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / 64.0;
      const Complex z = 0.9 * Complex(std::cos(theta), std::sin(theta));
      CHECK(f.eval(z).real() > 0.5);
    }
  }
}

TEST_CASE("generating function reproduces the coefficient table") {
  Rng rng(811);
  for (const double lambda : {0.3, 1.0, 1.7}) {
    const SpectralMeasure mu = random_atomic_measure(rng, 4);
    const DiskFunction a = generating_function(mu, lambda, 48);
    const CoeffTable t = alpha_recursive(mu, lambda, 48);
    CHECK(a.coeff(0) == Complex(lambda, 0.0));  // exact by construction
    for (int n = 0; n < 48; ++n) {
      CHECK(std::abs(a.coeff(n) - t.alpha[n]) <= 1e-10);
    }
  }
}

TEST_CASE("two-atom generating function has its rational closed form") {
  const SpectralMeasure mu = kz::test::two_atom_measure();
  for (const double lambda : {0.4, 1.0, 1.6}) {
    const DiskFunction a = generating_function(mu, lambda, 32);
    const Complex z(0.35, -0.2);
    const Complex closed =
        lambda * (1.0 - z * z) / (1.0 - (1.0 - lambda) * z * z);
    CHECK(std::abs(a.eval(z) - closed) <= 1e-10);
  }
}

TEST_CASE("at lambda = 1 the generating function inverts F") {
  Rng rng(821);
  const SpectralMeasure mu = random_atomic_measure(rng, 5);
  const DiskFunction a = generating_function(mu, 1.0, 32);
  const DiskFunction f = cauchy_transform(mu, 32);
  const auto prod = series_multiply(a.coeffs(), f.coeffs(), 32);
  CHECK(std::abs(prod[0] - Complex(1.0, 0.0)) <= 1e-12);
  for (int n = 1; n < 32; ++n) CHECK(std::abs(prod[n]) <= 1e-10);
}

TEST_CASE("inner function: exact value at 0 and contractive modulus") {
  Rng rng(823);
  const SpectralMeasure mu = random_atomic_measure(rng, 4);
  for (const double lambda : {0.3, 1.0, 1.8}) {
    const DiskFunction phi = inner_function(mu, lambda, 512);
    CHECK(phi.coeff(0) == Complex(1.0 - lambda, 0.0));
    for (const double r : {0.5, 0.9}) {
      for (int j = 0; j < 90; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / 90.0;
        const Complex z = r * Complex(std::cos(theta), std::sin(theta));
        CHECK(std::abs(phi.eval(z)) <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("inner function modulus climbs toward the boundary") {
  const SpectralMeasure mu = kz::test::two_atom_measure();
  const double lambda = 0.8;
  const DiskFunction phi = inner_function(mu, lambda, 4096);
  double prev = 0.0;
  for (const double r : {0.9, 0.99, 0.999}) {
    double max_mod = 0.0;
    for (int j = 0; j < 360; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / 360.0;
      const Complex z = r * Complex(std::cos(theta), std::sin(theta));
      max_mod = std::max(max_mod, std::abs(phi.eval(z)));
    }
    CHECK(max_mod <= 1.0 + 1e-9);
    CHECK(max_mod >= prev);  // approaches unimodularity from inside
    prev = max_mod;
  }
  CHECK(prev >= 0.99);
}

TEST_CASE("the Moebius map sends the critical line to the unit circle") {
  for (const double lambda : {0.3, 1.0, 1.5, 1.9}) {
    const MobiusData m = mobius_data(lambda);
    CHECK(m.center == Complex((lambda - 1.0) / (2.0 - lambda), 0.0));
    CHECK(m.radius == doctest::Approx(1.0 / (2.0 - lambda)).epsilon(1e-15));
    // r^2 - |c|^2 = lambda/(2-lambda)
    CHECK(m.radius * m.radius - std::norm(m.center) ==
          doctest::Approx(lambda / (2.0 - lambda)).epsilon(1e-12));
    for (const double v : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
      const Complex w(0.5, v);
      CHECK(std::abs(mobius_phi(w, lambda)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // the half-plane Re w > 1/2 lands inside the disk
    CHECK(std::abs(mobius_phi(Complex(0.8, 0.3), lambda)) < 1.0);
  }
}

TEST_CASE("lambda transform of the constant-moment series") {
  // fhat = mu_hat gives A F; at lambda = 1 this is the constant 1
  Rng rng(827);
  const SpectralMeasure mu = random_atomic_measure(rng, 4);
  std::vector<Complex> fhat(24);
  for (int n = 0; n < 24; ++n) fhat[n] = mu.moment(n);
  const DiskFunction g = lambda_transform(mu, fhat, 1.0, 24);
  CHECK(std::abs(g.coeff(0) - Complex(1.0, 0.0)) <= 1e-12);
  for (int n = 1; n < 24; ++n) CHECK(std::abs(g.coeff(n)) <= 1e-10);

  // coefficient 0 is always lambda * fhat_0
  std::vector<Complex> arbitrary(6);
  for (auto& c : arbitrary) c = Complex(rng.gaussian(), rng.gaussian());
  const DiskFunction h = lambda_transform(mu, arbitrary, 0.7, 6);
  CHECK(std::abs(h.coeff(0) - 0.7 * arbitrary[0]) <= 1e-14);
}

TEST_CASE("lambda transform agrees with the embedding coefficients") {
  Rng rng(829);
  const SpectralMeasure mu = random_atomic_measure(rng, 4);
  const double lambda = 1.3;
  const int order = 14;
  const L2Embedding emb(mu, order);
  const ComplexVector f = kz::test::random_vector(rng, emb.dim());
  std::vector<Complex> fhat(order);
  for (int j = 0; j < order; ++j) fhat[j] = emb.inner_product(emb.basis(j), f);
  const DiskFunction viaseries = lambda_transform(mu, fhat, lambda, order);
  const AuxVectors aux = aux_vectors(emb, alpha_recursive(mu, lambda, order));
  const auto d = expansion_coeffs(emb, aux, f);
  for (int n = 0; n < order; ++n) {
    CHECK(std::abs(viaseries.coeff(n) - d[n]) <= 1e-9);
  }
}

TEST_CASE("boundary quadrature matches the finite Parseval sum exactly") {
  Rng rng(839);
  for (const double lambda : {0.5, 1.3}) {
    const SpectralMeasure mu = random_atomic_measure(rng, 5);
    const BoundaryComparison b = coefficient_sum_vs_boundary(
        mu, lambda, 256, {0.5, 0.9, 0.99, 0.999});
    CHECK(b.nodes >= 512);
    CHECK(b.target == doctest::Approx(lambda * lambda * lambda / (2.0 - lambda))
                          .epsilon(1e-15));
    for (const RadiusComparison& rc : b.radii) {
      CHECK(std::abs(rc.quadrature - rc.parseval) <=
            1e-8 * std::max(1.0, rc.parseval));
    }
    // the Parseval sums increase with the radius toward the coefficient sum
    for (std::size_t i = 1; i < b.radii.size(); ++i) {
      CHECK(b.radii[i].parseval >= b.radii[i - 1].parseval - 1e-15);
    }
    CHECK(b.radii.back().parseval <= b.coefficient_sum + 1e-12);
  }
}

TEST_CASE("small lambda closes the gap to the effectiveness target") {
  const SpectralMeasure mu = kz::test::two_atom_measure();
  const BoundaryComparison b =
      coefficient_sum_vs_boundary(mu, 0.3, 2048, {0.999});
  CHECK(std::abs(b.radii[0].quadrature - b.target) <= 1e-3);
  CHECK(std::abs(b.coefficient_sum - b.target) <= 1e-10);
}

TEST_CASE("lebesgue boundary energy vanishes") {
  const BoundaryComparison b = coefficient_sum_vs_boundary(
      SpectralMeasure::lebesgue(), 0.9, 64, {0.9, 0.999});
  CHECK(b.coefficient_sum == 0.0);
  for (const RadiusComparison& rc : b.radii) {
    CHECK(rc.quadrature <= 1e-12);
    CHECK(rc.parseval == 0.0);
  }
}

TEST_CASE("grid CSV has one row per node and a stable header") {
  const DiskFunction f({Complex(1, 0), Complex(0.5, 0)});
  std::ostringstream out;
  write_grid_csv(out, f, {0.5, 0.9}, 8);
  const std::string body = out.str();
  CHECK(body.rfind("r,theta,re,im,modulus\n", 0) == 0);
  int rows = -1;
  for (const char c : body) rows += c == '\n';
  CHECK(rows == 16);
}

}  // TEST_SUITE
