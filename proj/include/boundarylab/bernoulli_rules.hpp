#pragma once

#include <cstdint>
#include <vector>

namespace boundarylab::bernoulli {

/// Tolerance and error level for a practical-boundary statement p < eps
/// (or p > 1 - eps). Requires 0 < epsilon < 1/2 and 0 < alpha < 1.
struct BoundaryRuleConfig {
  double epsilon = 0.01;
  double alpha = 0.05;

  void validate() const;
};

/// n trials with s successes, 0 <= s <= n.
struct BernoulliCounts {
  std::uint64_t n = 0;
  std::uint64_t s = 0;

  std::uint64_t failures() const { return n - s; }
  void validate() const;
};

/// Conjugate Beta(a, b) state for a Bernoulli success probability.
struct BetaPosterior {
  double a = 0.5;
  double b = 0.5;

  static BetaPosterior jeffreys() { return {0.5, 0.5}; }
  static BetaPosterior uniform() { return {1.0, 1.0}; }

  double mean() const { return a / (a + b); }
  void validate() const;
};

// Smallest n with (1 - eps)^n <= alpha. The closed form
// ceil(log alpha / log(1 - eps)) is corrected by direct comparison so that
// minimality holds exactly in floating point.
std::uint64_t all_failure_threshold(const BoundaryRuleConfig& cfg);

// (1 - p)^n, evaluated as exp(n * log1p(-p)).
double prob_all_failures(double p, std::uint64_t n);

// Probability that the practical-zero rule stops by n_max when the failure
// run is counted from trial 1: (1 - p)^{n_eps} if n_max >= n_eps, else 0.
double exact_stop_prob_tau0(double p, const BoundaryRuleConfig& cfg,
                            std::uint64_t n_max);

// Same quantity for the practical-one rule (run of successes from trial 1).
double exact_stop_prob_tau1(double p, const BoundaryRuleConfig& cfg,
                            std::uint64_t n_max);

/// s / n. Throws UndefinedEstimate when n == 0.
double mle(const BernoulliCounts& counts);

/// Beta(a + s, b + n - s).
BetaPosterior posterior_update(const BetaPosterior& prior,
                               const BernoulliCounts& counts);

// M_k = a / (a + b + k) for k = 0..k_max: the predictive success probability
// after a look-ahead window of k failures.
std::vector<double> rm_window_path(const BetaPosterior& prior,
                                   std::uint64_t k_max);

// Upper confidence bound for p after n failures, 1 - alpha^{1/n}.
double clopper_pearson_upper_zero(std::uint64_t n, double alpha);

// P(S_n <= s) under p = epsilon; the exact p-value for H0: p >= epsilon.
double binomial_onesided_pvalue(const BernoulliCounts& counts, double epsilon);

}  // namespace boundarylab::bernoulli
