#pragma once

#include <cstdint>
#include <vector>

#include <kz/engine.hpp>
#include <kz/types.hpp>

namespace kz {

// Finite family of orthogonal projections P_1..P_N on one space, validated
// at construction: each P must satisfy ||P^2 - P|| <= tol and
// ||P^* - P|| <= tol, and lambda must lie in (0,2).
class ProjectionSequence {
 public:
  ProjectionSequence(std::vector<ComplexOperator> projections, double lambda,
                     double tol = 1e-9);

  const std::vector<ComplexOperator>& projections() const { return p_; }
  double lambda() const { return lambda_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(p_.size()); }

 private:
  std::vector<ComplexOperator> p_;
  double lambda_ = 0.0;
  int dim_ = 0;
};

// Products T_n = (I - lambda P_n) ... (I - lambda P_1) with T_0 = I, and the
// increments Q_n = lambda P_n T_{n-1}. Q is stored 0-based: q[j] holds the
// increment of step j+1. The telescoping identity sum_j Q_j = I - T_N is
// checked at build time and its residual recorded.
struct ProductChain {
  double lambda = 0.0;
  std::vector<ComplexOperator> t;  // size N+1
  std::vector<ComplexOperator> q;  // size N
  double telescoping_residual = 0.0;

  int length() const { return static_cast<int>(q.size()); }
};

ProductChain build_chain(const ProjectionSequence& seq, int n);

// Operator-norm residual of
//   I - T_n^* T_n = ((2-lambda)/lambda) sum_{j<=n} Q_j^* Q_j
// at stage n (1-based; n <= chain length).
double lemma41_residual(const ProductChain& chain, int n);

// sum_j ||Q_j x||^2 against the scaled Parseval target
// (lambda/(2-lambda)) ||x||^2. The shortfall always equals
// (lambda/(2-lambda)) ||T_N x||^2, reported as lemma_gap; effectiveness
// means the gap tends to zero.
struct ParsevalGap {
  double sum = 0.0;
  double target = 0.0;
  double gap = 0.0;
  double lemma_gap = 0.0;
};
ParsevalGap parseval_gap(const ProductChain& chain, const ComplexVector& x);

// ||T_N e_i|| <= eps for every basis vector, an operational certificate of
// lambda-effectiveness for the spanned space.
bool certify_effective(const ProductChain& chain, double eps = 1e-8);

// Noiseless sharp-regret identity: for partial-isometry tasks the
// cumulative regret converges to ||w*||^2 / (lambda (2-lambda)). Every task
// is checked with is_partial_isometry first.
struct SharpRegretResult {
  double cumulative = 0.0;
  double target = 0.0;
  double gap = 0.0;
};
SharpRegretResult sharp_regret_check(const TaskSequence& seq,
                                     const ComplexVector& w_star,
                                     double lambda, std::int64_t k);

}  // namespace kz
