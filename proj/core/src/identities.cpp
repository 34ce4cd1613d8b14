#include <kz/identities.hpp>

#include <stdexcept>
#include <string>

#include <kz/linalg.hpp>

namespace kz {

ProjectionSequence::ProjectionSequence(std::vector<ComplexOperator> projections,
                                       double lambda, double tol)
    : lambda_(lambda) {
  if (!(lambda > 0.0 && lambda < 2.0)) {
    throw std::invalid_argument("ProjectionSequence: lambda must lie in (0,2)");
  }
  if (projections.empty()) {
    throw std::invalid_argument("ProjectionSequence: no projections");
  }
  dim_ = static_cast<int>(projections[0].rows());
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const ComplexOperator& p = projections[i];
    if (p.rows() != dim_ || p.cols() != dim_) {
      throw std::invalid_argument("ProjectionSequence: projection " +
                                  std::to_string(i) + " has wrong shape");
    }
    if (operator_norm(p * p - p) > tol) {
      throw std::invalid_argument("ProjectionSequence: projection " +
                                  std::to_string(i) + " is not idempotent");
    }
    if (operator_norm(ComplexOperator(p.adjoint()) - p) > tol) {
      throw std::invalid_argument("ProjectionSequence: projection " +
                                  std::to_string(i) + " is not self-adjoint");
    }
  }
  p_ = std::move(projections);
}

ProductChain build_chain(const ProjectionSequence& seq, int n) {
  if (n < 0 || n > seq.size()) {
    throw std::out_of_range("build_chain: n outside 0..size");
  }
  const int dim = seq.dim();
  const double lambda = seq.lambda();
  ProductChain chain;
  chain.lambda = lambda;
  chain.t.reserve(n + 1);
  chain.q.reserve(n);
  chain.t.push_back(ComplexOperator::Identity(dim, dim));
  for (int j = 0; j < n; ++j) {
    const ComplexOperator& p = seq.projections()[j];
    const ComplexOperator incr = lambda * (p * chain.t[j]);
    chain.q.push_back(incr);
    chain.t.push_back(chain.t[j] - incr);
  }
  // telescoping: sum_j Q_j = I - T_n
  ComplexOperator sum = ComplexOperator::Zero(dim, dim);
  for (const auto& q : chain.q) sum += q;
  chain.telescoping_residual = operator_norm(
      sum - (ComplexOperator::Identity(dim, dim) - chain.t[n]));
  return chain;
}

double lemma41_residual(const ProductChain& chain, int n) {
  if (n < 1 || n > chain.length()) {
    throw std::out_of_range("lemma41_residual: stage outside 1..length");
  }
  const int dim = static_cast<int>(chain.t[0].rows());
  const double lambda = chain.lambda;
  ComplexOperator rhs = ComplexOperator::Zero(dim, dim);
  for (int j = 0; j < n; ++j) rhs += chain.q[j].adjoint() * chain.q[j];
  rhs *= (2.0 - lambda) / lambda;
  const ComplexOperator lhs = ComplexOperator::Identity(dim, dim) -
                              chain.t[n].adjoint() * chain.t[n];
  return operator_norm(lhs - rhs);
}

ParsevalGap parseval_gap(const ProductChain& chain, const ComplexVector& x) {
  if (x.size() != chain.t[0].rows()) {
    throw std::invalid_argument("parseval_gap: vector dimension mismatch");
  }
  const double lambda = chain.lambda;
  ParsevalGap g;
  for (const auto& q : chain.q) g.sum += (q * x).squaredNorm();
  g.target = lambda / (2.0 - lambda) * x.squaredNorm();
  g.gap = g.target - g.sum;
  g.lemma_gap =
      lambda / (2.0 - lambda) * (chain.t[chain.length()] * x).squaredNorm();
  return g;
}

bool certify_effective(const ProductChain& chain, double eps) {
  const ComplexOperator& tail = chain.t[chain.length()];
  for (Eigen::Index i = 0; i < tail.cols(); ++i) {
    if (tail.col(i).norm() > eps) return false;
  }
  return true;
}

SharpRegretResult sharp_regret_check(const TaskSequence& seq,
                                     const ComplexVector& w_star,
                                     double lambda, std::int64_t k) {
  for (int i = 0; i < seq.task_count(); ++i) {
    if (!is_partial_isometry(seq.op(i))) {
      throw std::invalid_argument("sharp_regret_check: task " +
                                  std::to_string(i) +
                                  " is not a partial isometry");
    }
  }
  const RunResult res = run(seq, w_star, lambda, NoiseModel::none(), k);
  if (res.diverged) {
    throw std::runtime_error("sharp_regret_check: run diverged");
  }
  SharpRegretResult out;
  out.cumulative = res.ledger.cumulative.back();
  out.target = w_star.squaredNorm() / (lambda * (2.0 - lambda));
  out.gap = out.target - out.cumulative;
  return out;
}

}  // namespace kz
