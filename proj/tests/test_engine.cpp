#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <kz/engine.hpp>
#include <kz/linalg.hpp>
#include <kz/measures.hpp>
#include <kz/random.hpp>

#include "test_util.hpp"

using namespace kz;

namespace {

// rows of the identity as 1x4 tasks, mutually orthogonal partial isometries
std::vector<ComplexOperator> coordinate_rows(int dim) {
  std::vector<ComplexOperator> ops;
  for (int i = 0; i < dim; ++i) {
    ComplexOperator row = ComplexOperator::Zero(1, dim);
    row(0, i) = Complex(1.0, 0.0);
    ops.push_back(row);
  }
  return ops;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("the target is a fixed point of the update") {
  Rng rng(601);
  for (const double lambda : {0.3, 1.0, 2.0}) {
    const ComplexOperator x = kz::test::random_matrix(rng, 3, 5);
    const ComplexVector w_star = kz::test::random_vector(rng, 5);
    const ComplexVector y = x * w_star;
    const ComplexVector w_next = step(w_star, x, y, lambda);
    CHECK((w_next - w_star).norm() <= 1e-12 * w_star.norm());
  }
}

TEST_CASE("a single row at lambda = 1 projects onto the hyperplane") {
  Rng rng(607);
  const ComplexOperator x = kz::test::random_matrix(rng, 1, 6);
  const ComplexVector w_star = kz::test::random_vector(rng, 6);
  const ComplexVector y = x * w_star;
  const ComplexVector w1 = step(ComplexVector::Zero(6), x, y, 1.0);
  CHECK((x * w1 - y).norm() <= 1e-12 * y.norm());
}

TEST_CASE("lambda = 2 reflects the error across the row space") {
  Rng rng(613);
  const ComplexOperator x = kz::test::random_low_rank(rng, 3, 6, 2);
  const ComplexOperator p = row_space_projector(x);
  const ComplexVector w_star = kz::test::random_vector(rng, 6);
  const ComplexVector y = x * w_star;
  const ComplexVector w1 = step(ComplexVector::Zero(6), x, y, 2.0);
  const ComplexVector eps0 = w_star;  // w_0 = 0
  const ComplexVector eps1 = w_star - w1;
  CHECK((eps1 - (eps0 - 2.0 * (p * eps0))).norm() <= 1e-10 * eps0.norm());
  CHECK(eps1.norm() == doctest::Approx(eps0.norm()).epsilon(1e-10));
  CHECK_THROWS_AS(step(ComplexVector::Zero(6), x, y, 2.0 + 1e-9),
                  std::invalid_argument);
}

TEST_CASE("step rejects lambda outside (0,2] and mismatched shapes") {
  const ComplexOperator x = ComplexOperator::Identity(2, 2);
  const ComplexVector w = ComplexVector::Zero(2);
  const ComplexVector y = ComplexVector::Zero(2);
  CHECK_THROWS_AS(step(w, x, y, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step(w, x, y, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(step(ComplexVector::Zero(3), x, y, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(step(w, x, ComplexVector::Zero(3), 1.0), std::invalid_argument);
}

TEST_CASE("one sweep over coordinate rows at lambda = 1 recovers w*") {
  Rng rng(617);
  const TaskSequence seq = TaskSequence::natural(coordinate_rows(4));
  const ComplexVector w_star = kz::test::random_vector(rng, 4);
  const RunResult res = run(seq, w_star, 1.0, NoiseModel::none(), 4);
  CHECK((res.w_final - w_star).norm() <= 1e-13 * w_star.norm());
  // each step pays |w*_i|^2 exactly once
  CHECK(res.ledger.cumulative.back() ==
        doctest::Approx(w_star.squaredNorm()).epsilon(1e-12));
  for (int t = 0; t < 4; ++t) {
    CHECK(res.ledger.per_step[t] ==
          doctest::Approx(std::norm(w_star[t])).epsilon(1e-12));
  }
}

TEST_CASE("cyclic sweeps reach the sharp cumulative total") {
  Rng rng(619);
  const TaskSequence seq = TaskSequence::cyclic(coordinate_rows(4));
  const ComplexVector w_star = kz::test::random_vector(rng, 4);
  const double lambda = 0.5;
  // coordinate i decays by (1-lambda) per visit, so the cumulative regret
  // after s sweeps is ||w*||^2 (1 - (1-lambda)^{2s}) / (lambda (2-lambda))
  const RunResult res = run(seq, w_star, lambda, NoiseModel::none(), 80);
  const double target = w_star.squaredNorm() / (lambda * (2.0 - lambda));
  CHECK(res.ledger.cumulative.back() == doctest::Approx(target).epsilon(1e-11));
  CHECK_FALSE(res.diverged);
}

TEST_CASE("noiseless average regret stays under its envelope") {
  Rng rng(631);
  std::vector<ComplexOperator> ops;
  for (int i = 0; i < 5; ++i) ops.push_back(random_partial_isometry(rng, 2, 6));
  const TaskSequence seq = TaskSequence::cyclic(std::move(ops));
  const ComplexVector w_star = random_unit_vector(rng, 6);
  for (const double lambda : {0.4, 1.0, 1.6}) {
    const RunResult res = run(seq, w_star, lambda, NoiseModel::none(), 200);
    for (std::int64_t t = 0; t < 200; ++t) {
      CHECK(res.ledger.average[t] <= res.ledger.bound[t] + 1e-12);
    }
  }
}

TEST_CASE("zero-variance noise reproduces the noiseless run bit for bit") {
  Rng rng(641);
  const SpectralMeasure mu = kz::test::two_atom_measure();
  const L2Embedding emb(mu, 8);
  const TaskSequence seq = exponential_tasks(emb, 8, NormPolicy::assert_le_one);
  const ComplexVector w_star = random_unit_vector(rng, emb.dim());
  const RunResult clean = run(seq, w_star, 0.7, NoiseModel::none(), 8);
  const RunResult zero = run(seq, w_star, 0.7, NoiseModel::gaussian(0.0, 99), 8);
  REQUIRE(clean.ledger.steps() == zero.ledger.steps());
  for (std::int64_t t = 0; t < 8; ++t) {
    CHECK(clean.ledger.per_step[t] == zero.ledger.per_step[t]);
  }
}

TEST_CASE("repeated runs with one seed are bit-identical") {
  Rng rng(643);
  const SpectralMeasure mu = random_atomic_measure(rng, 5);
  const L2Embedding emb(mu, 10);
  const TaskSequence seq = exponential_tasks(emb, 10, NormPolicy::assert_le_one);
  const ComplexVector w_star = random_unit_vector(rng, emb.dim());
  const NoiseModel noise = NoiseModel::gaussian(0.09, 2024);
  const RunResult a = run(seq, w_star, 1.2, noise, 10, 3);
  const RunResult b = run(seq, w_star, 1.2, noise, 10, 3);
  for (std::int64_t t = 0; t < 10; ++t) {
    CHECK(a.ledger.per_step[t] == b.ledger.per_step[t]);
    CHECK(a.projected_error_sq[t] == b.projected_error_sq[t]);
  }
  CHECK((a.w_final - b.w_final).norm() == 0.0);

  const TrialSummary s1 = run_noisy_trials(seq, w_star, 1.2, noise, 10, 7);
  const TrialSummary s2 = run_noisy_trials(seq, w_star, 1.2, noise, 10, 7);
  for (std::int64_t t = 0; t < 10; ++t) {
    CHECK(s1.mean_average[t] == s2.mean_average[t]);
    CHECK(s1.stderr_average[t] == s2.stderr_average[t]);
  }
}

TEST_CASE("the error obeys eps_t = (I - lambda P_t) eps_{t-1}") {
  Rng rng(647);
  std::vector<ComplexOperator> ops;
  for (int i = 0; i < 3; ++i) ops.push_back(kz::test::random_low_rank(rng, 3, 5, 2));
  const TaskSequence seq = TaskSequence::cyclic(std::move(ops), NormPolicy::rescale);
  const ComplexVector w_star = kz::test::random_vector(rng, 5);
  const double lambda = 1.3;
  const RunResult res = run(seq, w_star, lambda, NoiseModel::none(), 7);

  ComplexVector eps = w_star;
  double prev_norm = eps.norm();
  for (std::int64_t t = 1; t <= 7; ++t) {
    const int idx = seq.task_index(t);
    CHECK(res.ledger.per_step[t - 1] ==
          doctest::Approx((seq.op(idx) * eps).squaredNorm()).epsilon(1e-11));
    // noiseless, so the projected error is the whole residual
    CHECK(res.projected_error_sq[t - 1] ==
          doctest::Approx(res.ledger.per_step[t - 1]).epsilon(1e-12));
    eps -= lambda * (seq.projector(idx) * eps);
    CHECK(eps.norm() <= prev_norm + 1e-12);  // contractive for lambda in (0,2)
    prev_norm = eps.norm();
  }
  CHECK((res.w_final - (w_star - eps)).norm() <= 1e-11 * w_star.norm());
}

TEST_CASE("noisy trials settle under the plateau envelope") {
  Rng rng(653);
  const SpectralMeasure mu = random_atomic_measure(rng, 5);
  const L2Embedding emb(mu, 300);
  const TaskSequence seq = exponential_tasks(emb, 300, NormPolicy::assert_le_one);
  CHECK(seq.pinv_bound() == doctest::Approx(1.0).epsilon(1e-10));
  const ComplexVector w_star = random_unit_vector(rng, emb.dim());
  const double lambda = 0.8, sigma2 = 0.25;
  const std::int64_t k = 300;
  const TrialSummary s = run_noisy_trials(
      seq, w_star, lambda, NoiseModel::gaussian(sigma2, 77), k, 250);
  CHECK(s.diverged_trials == 0);
  // mean average regret within two standard errors of the guarantee
  CHECK(s.mean_average[k - 1] <=
        s.bound[k - 1] + 2.0 * s.stderr_average[k - 1] + 1e-12);
  // and the envelope itself tends to the plateau constant
  const double plateau =
      (2.0 * lambda * seq.pinv_bound() / (2.0 - lambda) + 1.0) * sigma2;
  CHECK(s.bound[k - 1] <= 2.0 * w_star.squaredNorm() /
                              (lambda * (2.0 - lambda) * static_cast<double>(k)) +
                          plateau + 1e-12);
}

TEST_CASE("mean regret exceeds the projected part by sigma^2") {
  Rng rng(659);
  const SpectralMeasure mu = random_atomic_measure(rng, 5);
  const L2Embedding emb(mu, 300);
  const TaskSequence seq = exponential_tasks(emb, 300, NormPolicy::assert_le_one);
  const ComplexVector w_star = random_unit_vector(rng, emb.dim());
  const double sigma2 = 0.25;
  const std::int64_t k = 300;
  const TrialSummary s = run_noisy_trials(
      seq, w_star, 0.8, NoiseModel::gaussian(sigma2, 31), k, 250);
  double gap = 0.0;
  int counted = 0;
  for (std::int64_t t = 50; t < k; ++t) {
    gap += s.mean_regret[t] - s.mean_projected_error_sq[t];
    ++counted;
  }
  gap /= counted;
  CHECK(gap == doctest::Approx(sigma2).epsilon(0.08));
}

TEST_CASE("noise models have the advertised moments") {
  Rng rng(661);
  const int dim = 5, samples = 4000;

  const NoiseModel g = NoiseModel::gaussian(4.0, 0);
  double mean_sq = 0.0;
  ComplexVector mean = ComplexVector::Zero(dim);
  for (int i = 0; i < samples; ++i) {
    const ComplexVector eta = g.sample(rng, dim);
    mean_sq += eta.squaredNorm();
    mean += eta;
  }
  CHECK(mean_sq / samples == doctest::Approx(4.0).epsilon(0.05));
  CHECK((mean / samples).norm() <= 0.08);

  const NoiseModel u = NoiseModel::uniform_sphere(2.25, 0);
  for (int i = 0; i < 50; ++i) {
    CHECK(u.sample(rng, dim).squaredNorm() == doctest::Approx(2.25).epsilon(1e-12));
  }

  int calls = 0;
  const NoiseModel c = NoiseModel::custom(
      [&calls](Rng&, int d) {
        ++calls;
        return ComplexVector::Zero(d);
      },
      1.0, 0);
  CHECK(c.sample(rng, 3).size() == 3);
  CHECK(calls == 1);
  CHECK_THROWS_AS(NoiseModel::gaussian(-1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseModel::custom(nullptr, 1.0, 0), std::invalid_argument);
}

TEST_CASE("norm policies: refuse, rescale by a common factor, or flag") {
  Rng rng(673);
  ComplexOperator big = kz::test::random_matrix(rng, 2, 4);
  big *= 1.7 / operator_norm(big);
  ComplexOperator small = kz::test::random_matrix(rng, 2, 4);
  small *= 0.5 / operator_norm(small);

  CHECK_THROWS_AS(TaskSequence::natural({big, small}, NormPolicy::assert_le_one),
                  std::invalid_argument);

  const TaskSequence scaled = TaskSequence::natural({big, small}, NormPolicy::rescale);
  CHECK(scaled.scale() == doctest::Approx(1.7).epsilon(1e-10));
  CHECK(operator_norm(scaled.op(0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(operator_norm(scaled.op(1)) == doctest::Approx(0.5 / 1.7).epsilon(1e-10));
  CHECK_FALSE(scaled.norm_violation());

  const TaskSequence loose = TaskSequence::natural({big, small}, NormPolicy::allow);
  CHECK(loose.norm_violation());
  CHECK(loose.max_operator_norm() == doctest::Approx(1.7).epsilon(1e-10));
  CHECK(loose.scale() == 1.0);
}

TEST_CASE("selection rules schedule the right task at the right step") {
  Rng rng(677);
  auto ops = coordinate_rows(3);
  const TaskSequence nat = TaskSequence::natural(ops);
  CHECK(nat.available_steps() == 3);
  CHECK(nat.task_index(2) == 1);
  CHECK_THROWS_AS(nat.task_index(4), std::out_of_range);

  const TaskSequence cyc = TaskSequence::cyclic(ops);
  CHECK(cyc.task_index(4) == 0);
  CHECK(cyc.task_index(6) == 2);

  const TaskSequence ord = TaskSequence::explicit_order(ops, {0, 0, 2, 1});
  CHECK(ord.available_steps() == 4);
  CHECK(ord.task_index(2) == 0);
  CHECK(ord.task_index(3) == 2);
  CHECK_THROWS_AS(TaskSequence::explicit_order(ops, {0, 5}), std::invalid_argument);
  CHECK_THROWS_AS(TaskSequence::explicit_order(ops, {}), std::invalid_argument);

  // repeating an exhausted task costs nothing at lambda = 1
  const ComplexVector w_star = kz::test::random_vector(rng, 3);
  const RunResult res = run(ord, w_star, 1.0, NoiseModel::none(), 2);
  CHECK(res.ledger.per_step[1] <= 1e-20);

  CHECK_THROWS_AS(run(nat, w_star, 1.0, NoiseModel::none(), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(run(nat, kz::test::random_vector(rng, 4), 1.0,
                      NoiseModel::none(), 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(run(nat, w_star, 2.0, NoiseModel::none(), 3),
                  std::invalid_argument);
}

TEST_CASE("runaway iterates trip the divergence guard") {
  Rng rng(683);
  const TaskSequence seq = TaskSequence::cyclic(coordinate_rows(2));
  const ComplexVector w_star = random_unit_vector(rng, 2);
  const NoiseModel wild = NoiseModel::custom(
      [](Rng&, int d) {
        return ComplexVector::Constant(d, Complex(1e9, 0.0));
      },
      1.0, 0);
  const RunResult res = run(seq, w_star, 1.0, wild, 50);
  CHECK(res.diverged);
  CHECK(res.divergence_step >= 1);
  CHECK(res.ledger.steps() == res.divergence_step);
  CHECK(res.ledger.steps() < 50);
  CHECK_THROWS_AS(run_noisy_trials(seq, w_star, 1.0, wild, 50, 3),
                  std::runtime_error);
}

TEST_CASE("lambda recommendation hits the closed-form minimiser") {
  // beta = C sigma^2 k / (2 ||w*||^2)
  CHECK(recommend_lambda(1.0, 1.0, 0.0, 100) == 1.0);       // beta = 0
  CHECK(recommend_lambda(1.0, 1.0, 2.0, 1) == 0.5);         // beta = 1
  CHECK(recommend_lambda(1.0, 1.0, 200.0, 1) ==
        doctest::Approx(0.06825485).epsilon(2e-7));          // beta = 100
  for (const double beta : {0.01, 0.37, 1.0, 12.0, 100.0}) {
    const double lam = recommend_lambda(1.0, 1.0, 2.0 * beta, 1);
    CHECK(std::abs(2.0 * beta * lam * lam + lam - 1.0) <= 1e-12);
    CHECK(lam > 0.0);
    CHECK(lam <= 1.0);
  }
  CHECK_THROWS_AS(recommend_lambda(0.0, 1.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(recommend_lambda(1.0, 0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(recommend_lambda(1.0, 1.0, -1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(recommend_lambda(1.0, 1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("the recommendation minimises the surrogate on a fine grid") {
  for (const double beta : {0.01, 1.0, 100.0}) {
    // with ||w*||^2 = 1, C = 1, k = 2: a = 1, b = sigma2, beta = b/a
    const double a = 1.0, b = beta;
    const double lam = recommend_lambda(1.0, 1.0, beta, 2);
    const double best = regret_surrogate(lam, a, b);
    for (int i = 1; i < 2000; ++i) {
      const double x = 1e-3 * i;
      CHECK(best <= regret_surrogate(x, a, b) * (1.0 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("ledgers serialise with stable headers") {
  Rng rng(691);
  const TaskSequence seq = TaskSequence::cyclic(coordinate_rows(3));
  const ComplexVector w_star = random_unit_vector(rng, 3);
  const RunResult res = run(seq, w_star, 0.9, NoiseModel::none(), 5);
  std::ostringstream out;
  write_csv(out, res.ledger);
  CHECK(out.str().rfind("t,regret,cumulative,average,bound\n", 0) == 0);
  int rows = -1;
  for (const char c : out.str()) rows += c == '\n';
  CHECK(rows == 5);

  const TrialSummary s =
      run_noisy_trials(seq, w_star, 0.9, NoiseModel::gaussian(0.01, 8), 5, 4);
  std::ostringstream out2;
  write_csv(out2, s);
  CHECK(out2.str().rfind("t,mean_regret,mean_average,stderr_average,bound\n", 0) == 0);
}

}  // TEST_SUITE
