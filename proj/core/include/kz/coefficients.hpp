#pragma once

#include <ostream>
#include <vector>

#include <kz/measures.hpp>
#include <kz/types.hpp>

namespace kz {

enum class AlphaSource { recursive, combinatorial };

// Coefficients alpha_n of the relaxed expansion, alpha_0 = lambda.
struct CoeffTable {
  double lambda = 0.0;
  std::vector<Complex> alpha;
  AlphaSource source = AlphaSource::recursive;

  int order() const { return static_cast<int>(alpha.size()); }
};

// O(N^2) convolution recursion
//   alpha_0 = lambda,
//   alpha_n = -lambda * sum_{k=0}^{n-1} mu_hat(n-k) alpha_k.
// Requires lambda in (0,2).
CoeffTable alpha_recursive(const SpectralMeasure& mu, double lambda, int order);

// Independent route: sum over all 2^{n-1} compositions p of n,
//   alpha_n = sum_p (-1)^{len(p)} lambda^{len(p)+1} prod_j mu_hat(p_j),
// enumerated lexicographically. Exponential cost, so n is capped.
inline constexpr int kMaxCompositionIndex = 20;
CoeffTable alpha_combinatorial(const SpectralMeasure& mu, double lambda,
                               int order);

// Auxiliary vectors of the Gram-Schmidt-like recursion
//   h_0 = lambda e_0,
//   h_n = lambda (e_n - sum_{k<n} conj(mu_hat(n-k)) h_k),
// stored in embedding coordinates. Each h_n is cross-checked against the
// closed form h_n = sum_{j<=n} conj(alpha_{n-j}) e_j; the largest deviation
// seen is recorded.
struct AuxVectors {
  double lambda = 0.0;
  std::vector<ComplexVector> h;
  double closed_form_residual = 0.0;
};
AuxVectors aux_vectors(const L2Embedding& emb, const CoeffTable& table);

// d_n = <h_n, f> for n = 0..table.order()-1.
std::vector<Complex> expansion_coeffs(const L2Embedding& emb,
                                      const AuxVectors& aux,
                                      const ComplexVector& f);

// Partial sum sum_{n=1}^{N-1} |alpha_n|^2 against the effectiveness target
// lambda^3/(2-lambda). The gap vanishes iff the exponentials are
// lambda-effective (singular measures).
struct EffectivenessSum {
  double sum = 0.0;
  double target = 0.0;
  double gap = 0.0;
};
EffectivenessSum effectiveness_sum(const CoeffTable& table);

// ||u_n||^2 for u_n = sum_{l<=n} alpha_l e_l, computed two ways: directly in
// the embedding and by the scalar recursion
//   r_0^2 = lambda^2,  r_n^2 = r_{n-1}^2 + (1 - 2/lambda) |alpha_n|^2.
struct UNormSequence {
  std::vector<double> direct;
  std::vector<double> recursion;
  double max_deviation = 0.0;
};
UNormSequence u_norm_recursion(const L2Embedding& emb, const CoeffTable& table);

// Residual of the finite-stage identity for K_n(e_i) - e_i, where
// K_n(f) = sum_{j<=n} e_j <h_j, f>:
//   i = 0:  ((lambda-1)/lambda) u_n,
//   i >= 1: ((lambda-1)/lambda) v_{n,i} + sum_{j=1}^{i} mu_hat(-j) v_{n,i-j},
// with v_{n,m} = sum_{l=0}^{n-m} alpha_l e_{l+m}. The left side is built
// from the h recursion, the right side from the alpha table, so the two
// routes stay independent. Returns the L^2(mu) norm of the difference.
double verify_appendix_b(const L2Embedding& emb, const CoeffTable& table,
                         int i, int n);

// CSV: n, re_alpha, im_alpha, abs2_alpha, running_sum
void write_csv(std::ostream& out, const CoeffTable& table);

}  // namespace kz
