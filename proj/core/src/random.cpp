#include <kz/random.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/QR>

namespace kz {

std::uint64_t mix_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  // 53-bit mantissa, shifted into (0,1] so log() is always safe
  return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * (uniform() - 0x1.0p-53);
}

double Rng::gaussian() {
  const double u = uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * std::numbers::pi * v);
}

Complex Rng::complex_gaussian() {
  const double u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-std::log(u));
  const double t = 2.0 * std::numbers::pi * v;
  return Complex(r * std::cos(t), r * std::sin(t));
}

ComplexVector random_unit_vector(Rng& rng, int dim) {
  if (dim < 1) throw std::invalid_argument("random_unit_vector: dim < 1");
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.complex_gaussian();
  return v / v.norm();
}

ComplexOperator random_projector(Rng& rng, int dim, int rank) {
  if (rank < 0 || rank > dim) {
    throw std::invalid_argument("random_projector: rank out of range");
  }
  if (rank == 0) return ComplexOperator::Zero(dim, dim);
  ComplexOperator m(dim, rank);
  for (int j = 0; j < rank; ++j) {
    for (int i = 0; i < dim; ++i) m(i, j) = rng.complex_gaussian();
  }
  Eigen::HouseholderQR<ComplexOperator> qr(m);
  const ComplexOperator q =
      ComplexOperator(qr.householderQ()).leftCols(rank);
  return q * q.adjoint();
}

ComplexOperator random_partial_isometry(Rng& rng, int rows, int cols) {
  if (rows < 1 || rows > cols) {
    throw std::invalid_argument("random_partial_isometry: need 1 <= rows <= cols");
  }
  ComplexOperator m(cols, rows);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) m(i, j) = rng.complex_gaussian();
  }
  Eigen::HouseholderQR<ComplexOperator> qr(m);
  const ComplexOperator q =
      ComplexOperator(qr.householderQ()).leftCols(rows);
  return q.adjoint();
}

}  // namespace kz
