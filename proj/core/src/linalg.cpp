#include <kz/linalg.hpp>

#include <stdexcept>

#include <Eigen/SVD>

namespace kz {

int SvdFactors::rank() const {
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > rank_tol) ++r;
  }
  return r;
}

SvdFactors svd_factor(const ComplexOperator& a, std::optional<double> rank_tol) {
  if (!is_finite(a)) {
    throw std::invalid_argument("svd_factor: matrix has NaN or Inf entries");
  }
  if (rank_tol && *rank_tol < 0.0) {
    throw std::invalid_argument("svd_factor: rank_tol must be >= 0");
  }
  Eigen::JacobiSVD<ComplexOperator> svd(a,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f;
  f.u = svd.matrixU();
  f.sigma = svd.singularValues();
  f.v = svd.matrixV();
  const double sigma_max = f.sigma.size() > 0 ? f.sigma[0] : 0.0;
  f.rank_tol = rank_tol ? *rank_tol : kDefaultRankTolScale * sigma_max;
  return f;
}

ComplexOperator pseudoinverse(const ComplexOperator& a,
                              std::optional<double> rank_tol) {
  const SvdFactors f = svd_factor(a, rank_tol);
  // A+ = V diag(1/sigma_i) U^*, inverting only singular values above the cutoff
  RealVector inv = RealVector::Zero(f.sigma.size());
  for (Eigen::Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma[i] > f.rank_tol) inv[i] = 1.0 / f.sigma[i];
  }
  return f.v * inv.asDiagonal() * f.u.adjoint();
}

ComplexOperator row_space_projector(const ComplexOperator& a,
                                    std::optional<double> rank_tol) {
  const SvdFactors f = svd_factor(a, rank_tol);
  const int r = f.rank();
  const ComplexOperator vr = f.v.leftCols(r);
  return vr * vr.adjoint();
}

double operator_norm(const ComplexOperator& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexOperator> svd(a);
  return svd.singularValues()[0];
}

bool is_partial_isometry(const ComplexOperator& a, double tol) {
  const ComplexOperator g = a.adjoint() * a;
  return operator_norm(g - g * g) <= tol;
}

bool is_finite(const ComplexOperator& a) { return a.allFinite(); }
bool is_finite(const ComplexVector& v) { return v.allFinite(); }

}  // namespace kz
