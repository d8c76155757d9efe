#include "boundarylab/bernoulli_rules.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "boundarylab/error.hpp"

namespace boundarylab::bernoulli {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

double log_choose(std::uint64_t n, std::uint64_t k) {
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
         std::lgamma(nd - kd + 1.0);
}

}  // namespace

void BoundaryRuleConfig::validate() const {
  // epsilon = 1/2 is admitted: the practical-zero and practical-one zones
  // then touch at 1/2 without overlapping.
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw InvalidArgument("epsilon must lie in (0, 1/2], got " +
                          std::to_string(epsilon));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie in (0, 1), got " +
                          std::to_string(alpha));
  }
}

void BernoulliCounts::validate() const {
  if (s > n) {
    throw InvalidArgument("success count exceeds trial count");
  }
}

void BetaPosterior::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("Beta shape parameters must be positive and finite");
  }
}

std::uint64_t all_failure_threshold(const BoundaryRuleConfig& cfg) {
  cfg.validate();
  const double raw = std::log(cfg.alpha) / std::log1p(-cfg.epsilon);
  auto n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(raw)));
  while (n > 1 && prob_all_failures(cfg.epsilon, n - 1) <= cfg.alpha) {
    --n;
  }
  while (prob_all_failures(cfg.epsilon, n) > cfg.alpha) {
    ++n;
  }
  return n;
}

double prob_all_failures(double p, std::uint64_t n) {
  if (!is_probability(p)) {
    throw InvalidArgument("p must lie in [0, 1]");
  }
  if (n == 0) return 1.0;
  if (p == 1.0) return 0.0;
  return std::exp(static_cast<double>(n) * std::log1p(-p));
}

double exact_stop_prob_tau0(double p, const BoundaryRuleConfig& cfg,
                            std::uint64_t n_max) {
  const std::uint64_t n_eps = all_failure_threshold(cfg);
  if (n_max < n_eps) return 0.0;
  return prob_all_failures(p, n_eps);
}

double exact_stop_prob_tau1(double p, const BoundaryRuleConfig& cfg,
                            std::uint64_t n_max) {
  if (!is_probability(p)) {
    throw InvalidArgument("p must lie in [0, 1]");
  }
  // Relabelling successes as failures maps the practical-one rule onto the
  // practical-zero rule with 1 - p.
  return exact_stop_prob_tau0(1.0 - p, cfg, n_max);
}

double mle(const BernoulliCounts& counts) {
  counts.validate();
  if (counts.n == 0) {
    throw UndefinedEstimate("the MLE s/n is undefined for n = 0");
  }
  return static_cast<double>(counts.s) / static_cast<double>(counts.n);
}

BetaPosterior posterior_update(const BetaPosterior& prior,
                               const BernoulliCounts& counts) {
  prior.validate();
  counts.validate();
  return {prior.a + static_cast<double>(counts.s),
          prior.b + static_cast<double>(counts.failures())};
}

std::vector<double> rm_window_path(const BetaPosterior& prior,
                                   std::uint64_t k_max) {
  prior.validate();
  std::vector<double> path;
  path.reserve(k_max + 1);
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    path.push_back(prior.a / (prior.a + prior.b + static_cast<double>(k)));
  }
  return path;
}

double clopper_pearson_upper_zero(std::uint64_t n, double alpha) {
  if (n == 0) {
    throw InvalidArgument("Clopper-Pearson bound needs n >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie in (0, 1)");
  }
  // 1 - alpha^{1/n} without cancellation for large n.
  return -std::expm1(std::log(alpha) / static_cast<double>(n));
}

double binomial_onesided_pvalue(const BernoulliCounts& counts, double epsilon) {
  counts.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1)");
  }
  if (counts.s >= counts.n) return 1.0;
  const double log_eps = std::log(epsilon);
  const double log_comp = std::log1p(-epsilon);
  double total = 0.0;
  for (std::uint64_t k = 0; k <= counts.s; ++k) {
    const double log_term = log_choose(counts.n, k) +
                            static_cast<double>(k) * log_eps +
                            static_cast<double>(counts.n - k) * log_comp;
    total += std::exp(log_term);
  }
  return std::min(total, 1.0);
}

}  // namespace boundarylab::bernoulli
