#pragma once

#include <cstdint>

namespace boundarylab::sprt {

/// Simple-versus-simple Bernoulli hypotheses H0: p = p0 against H1: p = p1,
/// oriented for rare-event monitoring (p1 < p0).
struct SprtConfig {
  double p0 = 0.01;
  double p1 = 0.005;
  double alpha = 0.05;
  double beta = 0.05;

  /// Throws InvalidArgument unless 0 < p1 < p0 < 1, alpha and beta lie in
  /// (0, 1) and alpha + beta < 1.
  void validate() const;

  double lower_boundary() const;  // log(beta / (1 - alpha)) < 0
  double upper_boundary() const;  // log((1 - beta) / alpha) > 0
  double success_increment() const;  // log(p1 / p0)
  double failure_increment() const;  // log((1 - p1) / (1 - p0))
};

enum class Decision { Continue, AcceptH0, AcceptH1 };

struct SprtState {
  double llr = 0.0;
  std::uint64_t n = 0;
  std::uint64_t successes = 0;
  Decision decision = Decision::Continue;
};

// Adds one observation. The log-likelihood ratio is recomputed from the
// counts, so after n failures it equals n * failure_increment() exactly.
// Boundaries are closed: llr >= upper accepts H1, llr <= lower accepts H0.
// Throws FrozenState if the state has already decided.
SprtState step(const SprtState& state, const SprtConfig& cfg, bool y);

// Number of consecutive failures after which the SPRT first accepts H1,
// ceil(upper / failure_increment), adjusted to agree with step().
std::uint64_t all_failure_stop_time(const SprtConfig& cfg);

}  // namespace boundarylab::sprt
