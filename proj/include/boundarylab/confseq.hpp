#pragma once

#include <cstdint>

#include "boundarylab/bernoulli_rules.hpp"

namespace boundarylab::confseq {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double p) const { return lo <= p && p <= hi; }
  bool operator==(const Interval&) const = default;
};

// Time-uniform confidence sequence for a Bernoulli proportion built from the
// Beta-mixture likelihood ratio
//
//   R_n(p) = B(a + s, b + f) / (B(a, b) p^s (1 - p)^f),
//
// which is a nonnegative martingale with mean one under p. By Ville's
// inequality P(sup_n R_n(p) >= 1/alpha) <= alpha, so the sets
// {p : R_n(p) < 1/alpha} cover p at all times with probability >= 1 - alpha.
//
// `running` holds the intersection of those sets over all times so far; it
// only ever shrinks.
struct ConfSeqState {
  bernoulli::BetaPosterior prior = bernoulli::BetaPosterior::jeffreys();
  bernoulli::BernoulliCounts counts{};
  double alpha = 0.05;
  Interval running{};
};

enum class BoundaryKind { Continue, PracticalZero, PracticalOne };

struct BoundaryDecision {
  BoundaryKind kind = BoundaryKind::Continue;
  std::uint64_t at_n = 0;
};

inline constexpr double kEndpointTolerance = 1e-10;

ConfSeqState make_state(double alpha, bernoulli::BetaPosterior prior =
                                          bernoulli::BetaPosterior::jeffreys());

// Adds one binary outcome and tightens the running interval.
ConfSeqState update(const ConfSeqState& state, bool y);

// R_n(p). Throws BoundaryEvaluation for p outside (0, 1).
double mixture_ratio(const ConfSeqState& state, double p);

// The per-time set {p : R_n(p) < 1/alpha} for the given counts, without the
// running intersection. A function of (n, s, alpha, prior) only.
Interval raw_interval(const bernoulli::BernoulliCounts& counts, double alpha,
                      const bernoulli::BetaPosterior& prior =
                          bernoulli::BetaPosterior::jeffreys());

// The running interval carried by the state.
Interval interval(const ConfSeqState& state);

BoundaryDecision check_stop(const Interval& iv, double epsilon,
                            std::uint64_t at_n = 0);
BoundaryDecision check_stop(const ConfSeqState& state, double epsilon);

}  // namespace boundarylab::confseq
