#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <vector>

#include <kz/measures.hpp>
#include <kz/random.hpp>
#include <kz/types.hpp>

namespace kz {

// What to do with tasks whose operator norm exceeds 1 (the regret bounds
// assume contractive tasks):
//   assert_le_one - refuse the sequence
//   rescale       - divide every task by the common factor max_t ||X_t||
//   allow         - keep as given but flag the violation
enum class NormPolicy { assert_le_one, rescale, allow };

enum class SelectionRule { natural, cyclic, explicit_order };

struct NoiseModel {
  enum class Kind { none, gaussian, uniform_sphere, custom };

  Kind kind = Kind::none;
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
  // custom samplers must be mean-zero with E||eta||^2 = sigma2
  std::function<ComplexVector(Rng&, int)> sampler;

  static NoiseModel none();
  // isotropic complex gaussian with E||eta||^2 = sigma2
  static NoiseModel gaussian(double sigma2, std::uint64_t seed);
  // uniform direction, fixed length sqrt(sigma2)
  static NoiseModel uniform_sphere(double sigma2, std::uint64_t seed);
  static NoiseModel custom(std::function<ComplexVector(Rng&, int)> sampler,
                           double sigma2, std::uint64_t seed);

  ComplexVector sample(Rng& rng, int dim) const;
};

// Ordered family of measurement operators with the per-task quantities the
// iteration needs (pseudoinverse, row-space projector) computed once at
// construction. Immutable afterwards, so trials may share one instance
// across threads.
class TaskSequence {
 public:
  static TaskSequence natural(std::vector<ComplexOperator> ops,
                              NormPolicy policy = NormPolicy::assert_le_one);
  static TaskSequence cyclic(std::vector<ComplexOperator> ops,
                             NormPolicy policy = NormPolicy::assert_le_one);
  static TaskSequence explicit_order(std::vector<ComplexOperator> ops,
                                     std::vector<int> order,
                                     NormPolicy policy = NormPolicy::assert_le_one);

  int task_count() const { return static_cast<int>(tasks_.size()); }
  int domain_dim() const { return domain_dim_; }
  SelectionRule rule() const { return rule_; }

  // steps the rule can serve; cyclic sequences never run out
  std::int64_t available_steps() const;
  // task index used at step t (1-based)
  int task_index(std::int64_t t) const;

  const ComplexOperator& op(int idx) const { return tasks_[idx].x; }
  const ComplexOperator& pinv(int idx) const { return tasks_[idx].pinv; }
  const ComplexOperator& projector(int idx) const { return tasks_[idx].projector; }

  // C = sup_t ||X_t+||^2, the constant in the noisy bounds
  double pinv_bound() const { return pinv_bound_; }
  double max_operator_norm() const { return max_norm_; }
  // factor the sequence was divided by under NormPolicy::rescale (1 if none)
  double scale() const { return scale_; }
  // true when NormPolicy::allow admitted a task with norm > 1
  bool norm_violation() const { return norm_violation_; }

 private:
  struct Prepared {
    ComplexOperator x;
    ComplexOperator pinv;
    ComplexOperator projector;
    double pinv_norm_sq = 0.0;
  };

  TaskSequence(std::vector<ComplexOperator> ops, SelectionRule rule,
               std::vector<int> order, NormPolicy policy);

  std::vector<Prepared> tasks_;
  SelectionRule rule_ = SelectionRule::natural;
  std::vector<int> order_;
  int domain_dim_ = 0;
  double pinv_bound_ = 0.0;
  double max_norm_ = 0.0;
  double scale_ = 1.0;
  bool norm_violation_ = false;
};

// Rank-one partial-isometry tasks from the exponential system of an atomic
// measure: task n maps h to <e_n, h> in the embedding's unit coordinates.
TaskSequence exponential_tasks(const L2Embedding& emb, int count,
                               NormPolicy policy = NormPolicy::assert_le_one);

// Instantaneous regret ||X_t w_{t-1} - y_t||^2 per step plus running sums
// and the matching analytic envelope for the average.
struct RegretLedger {
  std::vector<double> per_step;
  std::vector<double> cumulative;
  std::vector<double> average;
  std::vector<double> bound;

  std::int64_t steps() const { return static_cast<std::int64_t>(per_step.size()); }
};

struct RunResult {
  RegretLedger ledger;
  ComplexVector w_final;
  // ||X_t eps_{t-1}||^2 per step, the noise-free part of the residual
  std::vector<double> projected_error_sq;
  bool diverged = false;
  std::int64_t divergence_step = 0;
  double pinv_bound = 0.0;
};

// One relaxed update w + lambda X+ (y - X w). Accepts lambda in (0,2]; the
// boundary value flips the error across the row space. Computes the
// pseudoinverse on the spot; run() uses the cached per-task data instead.
ComplexVector step(const ComplexVector& w_prev, const ComplexOperator& x,
                   const ComplexVector& y, double lambda);

// Iterate k steps from w_0 = 0 against observations y_t = X_t w* (+ noise).
// Requires lambda in (0,2) strictly. Reruns with the same seed and trial
// index are bit-identical. If ||w* - w_t|| exceeds 1e6 ||w*|| the run stops
// and reports the step; the partial ledger is kept.
RunResult run(const TaskSequence& seq, const ComplexVector& w_star,
              double lambda, const NoiseModel& noise, std::int64_t k,
              std::uint64_t trial = 0);

// Independent repetitions of run() with per-trial seeds derived from the
// noise seed. Means and standard errors are over trials.
struct TrialSummary {
  std::vector<double> mean_regret;
  std::vector<double> mean_average;
  std::vector<double> stderr_average;
  std::vector<double> mean_projected_error_sq;
  std::vector<double> bound;
  int trials = 0;
  int diverged_trials = 0;
};
TrialSummary run_noisy_trials(const TaskSequence& seq,
                              const ComplexVector& w_star, double lambda,
                              const NoiseModel& noise, std::int64_t k,
                              int trials);

// Surrogate for the k-step noisy average-regret guarantee,
//   f(lambda) = a / (lambda (2-lambda)) + 2 b lambda / (2-lambda),
// with a = 2||w*||^2 / k and b = C sigma^2.
double regret_surrogate(double lambda, double a, double b);

// Minimiser of the surrogate: with beta = C sigma^2 k / (2 ||w*||^2),
//   lambda* = (sqrt(1+8 beta) - 1) / (4 beta)  in (0,1],
// evaluated in the cancellation-free form 2 / (1 + sqrt(1+8 beta)).
double recommend_lambda(double norm_w_sq, double pinv_bound, double sigma2,
                        std::int64_t k);

// CSV: t, regret, cumulative, average, bound
void write_csv(std::ostream& out, const RegretLedger& ledger);
// CSV: t, mean_regret, mean_average, stderr_average, bound
void write_csv(std::ostream& out, const TrialSummary& summary);

}  // namespace kz
