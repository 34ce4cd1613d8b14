#include <kz/engine.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include <kz/io.hpp>
#include <kz/linalg.hpp>

namespace kz {

NoiseModel NoiseModel::none() { return NoiseModel{}; }

NoiseModel NoiseModel::gaussian(double sigma2, std::uint64_t seed) {
  if (sigma2 < 0.0) throw std::invalid_argument("NoiseModel: sigma2 < 0");
  NoiseModel n;
  n.kind = Kind::gaussian;
  n.sigma2 = sigma2;
  n.seed = seed;
  return n;
}

NoiseModel NoiseModel::uniform_sphere(double sigma2, std::uint64_t seed) {
  if (sigma2 < 0.0) throw std::invalid_argument("NoiseModel: sigma2 < 0");
  NoiseModel n;
  n.kind = Kind::uniform_sphere;
  n.sigma2 = sigma2;
  n.seed = seed;
  return n;
}

NoiseModel NoiseModel::custom(std::function<ComplexVector(Rng&, int)> sampler,
                              double sigma2, std::uint64_t seed) {
  if (!sampler) throw std::invalid_argument("NoiseModel: empty sampler");
  NoiseModel n;
  n.kind = Kind::custom;
  n.sigma2 = sigma2;
  n.seed = seed;
  n.sampler = std::move(sampler);
  return n;
}

ComplexVector NoiseModel::sample(Rng& rng, int dim) const {
  switch (kind) {
    case Kind::none:
      return ComplexVector::Zero(dim);
    case Kind::gaussian: {
      // per-coordinate variance sigma2/dim so that E||eta||^2 = sigma2
      const double s = std::sqrt(sigma2 / dim);
      ComplexVector eta(dim);
      for (int i = 0; i < dim; ++i) eta[i] = s * rng.complex_gaussian();
      return eta;
    }
    case Kind::uniform_sphere: {
      ComplexVector eta(dim);
      for (int i = 0; i < dim; ++i) eta[i] = rng.complex_gaussian();
      return std::sqrt(sigma2) * (eta / eta.norm());
    }
    case Kind::custom:
      return sampler(rng, dim);
  }
  throw std::logic_error("unreachable");
}

TaskSequence::TaskSequence(std::vector<ComplexOperator> ops, SelectionRule rule,
                           std::vector<int> order, NormPolicy policy)
    : rule_(rule), order_(std::move(order)) {
  if (ops.empty()) throw std::invalid_argument("TaskSequence: no tasks");
  domain_dim_ = static_cast<int>(ops[0].cols());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!is_finite(ops[i])) {
      throw std::invalid_argument("TaskSequence: task " + std::to_string(i) +
                                  " has non-finite entries");
    }
    if (ops[i].cols() != domain_dim_) {
      throw std::invalid_argument("TaskSequence: task " + std::to_string(i) +
                                  " acts on a different domain");
    }
  }
  for (const int idx : order_) {
    if (idx < 0 || idx >= static_cast<int>(ops.size())) {
      throw std::invalid_argument("TaskSequence: order refers to missing task");
    }
  }

  for (const auto& x : ops) {
    const double n = operator_norm(x);
    if (n > max_norm_) max_norm_ = n;
  }
  constexpr double kNormSlack = 1.0 + 1e-12;
  if (max_norm_ > kNormSlack) {
    switch (policy) {
      case NormPolicy::assert_le_one:
        throw std::invalid_argument(
            "TaskSequence: operator norm " + std::to_string(max_norm_) +
            " exceeds 1 (use rescale or allow)");
      case NormPolicy::rescale:
        // one common factor keeps the tasks' relative geometry
        scale_ = max_norm_;
        for (auto& x : ops) x /= scale_;
        max_norm_ /= scale_;
        break;
      case NormPolicy::allow:
        norm_violation_ = true;
        break;
    }
  }

  tasks_.reserve(ops.size());
  for (auto& x : ops) {
    Prepared p;
    p.pinv = pseudoinverse(x);
    p.projector = row_space_projector(x);
    p.pinv_norm_sq = [&] {
      const double n = operator_norm(p.pinv);
      return n * n;
    }();
    p.x = std::move(x);
    if (p.pinv_norm_sq > pinv_bound_) pinv_bound_ = p.pinv_norm_sq;
    tasks_.push_back(std::move(p));
  }
}

TaskSequence TaskSequence::natural(std::vector<ComplexOperator> ops,
                                   NormPolicy policy) {
  return TaskSequence(std::move(ops), SelectionRule::natural, {}, policy);
}

TaskSequence TaskSequence::cyclic(std::vector<ComplexOperator> ops,
                                  NormPolicy policy) {
  return TaskSequence(std::move(ops), SelectionRule::cyclic, {}, policy);
}

TaskSequence TaskSequence::explicit_order(std::vector<ComplexOperator> ops,
                                          std::vector<int> order,
                                          NormPolicy policy) {
  if (order.empty()) throw std::invalid_argument("TaskSequence: empty order");
  return TaskSequence(std::move(ops), SelectionRule::explicit_order,
                      std::move(order), policy);
}

std::int64_t TaskSequence::available_steps() const {
  switch (rule_) {
    case SelectionRule::natural:
      return task_count();
    case SelectionRule::cyclic:
      return std::numeric_limits<std::int64_t>::max();
    case SelectionRule::explicit_order:
      return static_cast<std::int64_t>(order_.size());
  }
  throw std::logic_error("unreachable");
}

int TaskSequence::task_index(std::int64_t t) const {
  if (t < 1 || t > available_steps()) {
    throw std::out_of_range("TaskSequence: step " + std::to_string(t) +
                            " outside the available schedule");
  }
  switch (rule_) {
    case SelectionRule::natural:
      return static_cast<int>(t - 1);
    case SelectionRule::cyclic:
      return static_cast<int>((t - 1) % task_count());
    case SelectionRule::explicit_order:
      return order_[static_cast<std::size_t>(t - 1)];
  }
  throw std::logic_error("unreachable");
}

TaskSequence exponential_tasks(const L2Embedding& emb, int count,
                               NormPolicy policy) {
  if (count < 1 || count > emb.order()) {
    throw std::invalid_argument("exponential_tasks: count outside embedding order");
  }
  std::vector<ComplexOperator> ops;
  ops.reserve(count);
  for (int n = 0; n < count; ++n) {
    ops.push_back(emb.unit_basis(n).adjoint());  // 1 x m row, unit norm
  }
  return TaskSequence::natural(std::move(ops), policy);
}

namespace {

void check_lambda_open(double lambda, const char* who) {
  if (!(lambda > 0.0 && lambda < 2.0)) {
    throw std::invalid_argument(std::string(who) + ": lambda must lie in (0,2)");
  }
}

// average-regret envelope at step t
double bound_at(double norm_w_sq, double lambda, double pinv_bound,
                double sigma2, bool noisy, std::int64_t t) {
  const double td = static_cast<double>(t);
  const double base = norm_w_sq / (lambda * (2.0 - lambda) * td);
  if (!noisy) return base;
  return 2.0 * base +
         (2.0 * lambda * pinv_bound * (1.0 - 1.0 / td) / (2.0 - lambda) + 1.0) *
             sigma2;
}

}  // namespace

ComplexVector step(const ComplexVector& w_prev, const ComplexOperator& x,
                   const ComplexVector& y, double lambda) {
  if (!(lambda > 0.0 && lambda <= 2.0)) {
    throw std::invalid_argument("step: lambda must lie in (0,2]");
  }
  if (x.cols() != w_prev.size() || x.rows() != y.size()) {
    throw std::invalid_argument("step: dimension mismatch");
  }
  const ComplexOperator pinv = pseudoinverse(x);
  return w_prev + lambda * (pinv * (y - x * w_prev));
}

RunResult run(const TaskSequence& seq, const ComplexVector& w_star,
              double lambda, const NoiseModel& noise, std::int64_t k,
              std::uint64_t trial) {
  check_lambda_open(lambda, "run");
  if (k < 1) throw std::invalid_argument("run: k < 1");
  if (k > seq.available_steps()) {
    throw std::invalid_argument("run: schedule provides only " +
                                std::to_string(seq.available_steps()) + " steps");
  }
  if (w_star.size() != seq.domain_dim()) {
    throw std::invalid_argument("run: w_star dimension mismatch");
  }
  if (!is_finite(w_star)) throw std::invalid_argument("run: w_star not finite");

  const bool noisy = noise.kind != NoiseModel::Kind::none && noise.sigma2 > 0.0;
  const double norm_w_sq = w_star.squaredNorm();
  const double guard = 1e6 * std::sqrt(norm_w_sq);

  Rng rng(mix_seed(noise.seed, trial));

  RunResult res;
  res.pinv_bound = seq.pinv_bound();
  res.ledger.per_step.reserve(k);
  res.ledger.cumulative.reserve(k);
  res.ledger.average.reserve(k);
  res.ledger.bound.reserve(k);
  res.projected_error_sq.reserve(k);

  ComplexVector w = ComplexVector::Zero(seq.domain_dim());
  double cumulative = 0.0;
  for (std::int64_t t = 1; t <= k; ++t) {
    const int idx = seq.task_index(t);
    const ComplexOperator& x = seq.op(idx);
    const ComplexVector eta = noisy ? noise.sample(rng, static_cast<int>(x.rows()))
                                    : ComplexVector::Zero(x.rows());
    // y_t = X_t w* + eta_t; the residual then satisfies X_t eps = -(r + eta)
    const ComplexVector y = x * w_star + eta;
    const ComplexVector r = x * w - y;
    const double regret = r.squaredNorm();
    cumulative += regret;
    res.ledger.per_step.push_back(regret);
    res.ledger.cumulative.push_back(cumulative);
    res.ledger.average.push_back(cumulative / static_cast<double>(t));
    res.ledger.bound.push_back(
        bound_at(norm_w_sq, lambda, seq.pinv_bound(), noise.sigma2, noisy, t));
    res.projected_error_sq.push_back((r + eta).squaredNorm());

    w += lambda * (seq.pinv(idx) * (-r));

    if ((w_star - w).norm() > guard) {
      res.diverged = true;
      res.divergence_step = t;
      break;
    }
  }
  res.w_final = std::move(w);
  return res;
}

TrialSummary run_noisy_trials(const TaskSequence& seq,
                              const ComplexVector& w_star, double lambda,
                              const NoiseModel& noise, std::int64_t k,
                              int trials) {
  if (trials < 1) throw std::invalid_argument("run_noisy_trials: trials < 1");
  TrialSummary s;
  s.trials = trials;
  s.mean_regret.assign(k, 0.0);
  s.mean_average.assign(k, 0.0);
  s.mean_projected_error_sq.assign(k, 0.0);
  std::vector<double> m2(k, 0.0);  // Welford accumulator for average_t

  for (int trial = 0; trial < trials; ++trial) {
    const RunResult r =
        run(seq, w_star, lambda, noise, k, static_cast<std::uint64_t>(trial));
    if (r.diverged) {
      ++s.diverged_trials;
      continue;
    }
    if (s.bound.empty()) s.bound = r.ledger.bound;
    const double n = static_cast<double>(trial - s.diverged_trials + 1);
    for (std::int64_t t = 0; t < k; ++t) {
      s.mean_regret[t] += (r.ledger.per_step[t] - s.mean_regret[t]) / n;
      s.mean_projected_error_sq[t] +=
          (r.projected_error_sq[t] - s.mean_projected_error_sq[t]) / n;
      const double delta = r.ledger.average[t] - s.mean_average[t];
      s.mean_average[t] += delta / n;
      m2[t] += delta * (r.ledger.average[t] - s.mean_average[t]);
    }
  }
  const int used = trials - s.diverged_trials;
  if (used == 0) throw std::runtime_error("run_noisy_trials: every trial diverged");
  s.stderr_average.assign(k, 0.0);
  if (used > 1) {
    for (std::int64_t t = 0; t < k; ++t) {
      s.stderr_average[t] = std::sqrt(m2[t] / (used - 1) / used);
    }
  }
  return s;
}

double regret_surrogate(double lambda, double a, double b) {
  check_lambda_open(lambda, "regret_surrogate");
  return a / (lambda * (2.0 - lambda)) + 2.0 * b * lambda / (2.0 - lambda);
}

double recommend_lambda(double norm_w_sq, double pinv_bound, double sigma2,
                        std::int64_t k) {
  if (!(norm_w_sq > 0.0)) throw std::invalid_argument("recommend_lambda: ||w*||^2 must be > 0");
  if (!(pinv_bound > 0.0)) throw std::invalid_argument("recommend_lambda: C must be > 0");
  if (sigma2 < 0.0) throw std::invalid_argument("recommend_lambda: sigma2 < 0");
  if (k < 1) throw std::invalid_argument("recommend_lambda: k < 1");
  const double beta =
      pinv_bound * sigma2 * static_cast<double>(k) / (2.0 * norm_w_sq);
  return 2.0 / (1.0 + std::sqrt(1.0 + 8.0 * beta));
}

void write_csv(std::ostream& out, const RegretLedger& ledger) {
  out << "t,regret,cumulative,average,bound\n";
  for (std::int64_t t = 0; t < ledger.steps(); ++t) {
    out << (t + 1) << ',' << format_double(ledger.per_step[t]) << ','
        << format_double(ledger.cumulative[t]) << ','
        << format_double(ledger.average[t]) << ','
        << format_double(ledger.bound[t]) << '\n';
  }
}

void write_csv(std::ostream& out, const TrialSummary& summary) {
  out << "t,mean_regret,mean_average,stderr_average,bound\n";
  const std::size_t k = summary.mean_regret.size();
  for (std::size_t t = 0; t < k; ++t) {
    out << (t + 1) << ',' << format_double(summary.mean_regret[t]) << ','
        << format_double(summary.mean_average[t]) << ','
        << format_double(summary.stderr_average[t]) << ','
        << format_double(summary.bound[t]) << '\n';
  }
}

}  // namespace kz
