#pragma once

#include <ostream>
#include <vector>

#include <kz/coefficients.hpp>
#include <kz/measures.hpp>
#include <kz/types.hpp>

namespace kz {

// Greedy expansion f ~ sum_n e_n d_n with d_n = <h_n, f>. Entry N of
// partial_residuals is ||f - sum_{n<N} e_n d_n||, so index 0 holds ||f||;
// parseval_partial[N] = sum_{n<N} |d_n|^2 climbs towards
// (lambda/(2-lambda)) ||f||^2 exactly when the system is lambda-effective.
struct ExpansionReport {
  double lambda = 0.0;
  std::vector<double> partial_residuals;
  std::vector<double> parseval_partial;
  double parseval_target = 0.0;
  std::vector<Complex> coeffs;
};

ExpansionReport expand(const L2Embedding& emb, const AuxVectors& aux,
                       const ComplexVector& f, int terms);

// Plain Fourier coefficients against the exponentials, fhat_j = <e_j, f>.
std::vector<Complex> standard_fourier_coeffs(const L2Embedding& emb,
                                             const ComplexVector& f, int count);

// CSV: terms, residual, parseval_partial, parseval_target
void write_csv(std::ostream& out, const ExpansionReport& report);

}  // namespace kz
