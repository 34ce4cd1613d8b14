#pragma once

#include <optional>

#include <kz/types.hpp>

namespace kz {

// Thin SVD A = U diag(sigma) V^*, with singular values sorted decreasingly.
struct SvdFactors {
  ComplexOperator u;
  RealVector sigma;
  ComplexOperator v;
  double rank_tol = 0.0;

  // number of singular values strictly above rank_tol
  int rank() const;
};

// Default rank cutoff: singular values below 1e-12 * sigma_max are treated
// as zero. An explicit rank_tol must be >= 0 and is taken as an absolute
// cutoff.
inline constexpr double kDefaultRankTolScale = 1e-12;

// Throws std::invalid_argument on NaN/Inf entries or negative rank_tol.
SvdFactors svd_factor(const ComplexOperator& a,
                      std::optional<double> rank_tol = std::nullopt);

// Moore-Penrose pseudoinverse via the SVD, small singular values dropped.
ComplexOperator pseudoinverse(const ComplexOperator& a,
                              std::optional<double> rank_tol = std::nullopt);

// Orthogonal projector onto the row space (= range of A^*), built from the
// right singular vectors so that self-adjointness holds by construction.
ComplexOperator row_space_projector(const ComplexOperator& a,
                                    std::optional<double> rank_tol = std::nullopt);

// Largest singular value.
double operator_norm(const ComplexOperator& a);

// Checks ||A^*A - (A^*A)^2|| <= tol in operator norm, i.e. A^*A is a
// projection, which characterises partial isometries.
bool is_partial_isometry(const ComplexOperator& a, double tol = 1e-9);

bool is_finite(const ComplexOperator& a);
bool is_finite(const ComplexVector& v);

}  // namespace kz
