#include "boundarylab/confseq.hpp"

#include <cmath>
#include <limits>

#include "boundarylab/error.hpp"

namespace boundarylab::confseq {

namespace {

using bernoulli::BernoulliCounts;
using bernoulli::BetaPosterior;

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// log R_n(p) for fixed counts, extended to p in {0, 1} by its limits.
class LogRatio {
 public:
  LogRatio(const BernoulliCounts& counts, const BetaPosterior& prior)
      : s_(static_cast<double>(counts.s)),
        f_(static_cast<double>(counts.failures())),
        offset_(log_beta(prior.a + s_, prior.b + f_) -
                log_beta(prior.a, prior.b)) {}

  double operator()(double p) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (p <= 0.0) return s_ > 0.0 ? inf : offset_;
    if (p >= 1.0) return f_ > 0.0 ? inf : offset_;
    double value = offset_;
    if (s_ > 0.0) value -= s_ * std::log(p);
    if (f_ > 0.0) value -= f_ * std::log1p(-p);
    return value;
  }

 private:
  double s_;
  double f_;
  double offset_;
};

// Locates the crossing of log R = threshold between a point known to be
// inside the set and one known to be outside. Returns the outside end of
// the final bracket, so the reported interval contains the exact one.
double bisect(const LogRatio& log_ratio, double threshold, double inside,
              double outside) {
  while (std::abs(outside - inside) > kEndpointTolerance) {
    const double mid = 0.5 * (inside + outside);
    if (log_ratio(mid) < threshold) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return outside;
}

// Intersects {p : R_n(p) < 1/alpha} with `previous`. R_n is log-convex in p
// with R_n(s/n) <= 1 (the mixture marginal never exceeds the maximized
// likelihood), so the set is an interval around s/n and an endpoint of
// `previous` that is still inside it needs no search.
Interval intersect_with_raw(const BernoulliCounts& counts, double alpha,
                            const BetaPosterior& prior,
                            const Interval& previous) {
  if (counts.n == 0) return previous;
  const LogRatio log_ratio(counts, prior);
  const double threshold = -std::log(alpha);
  const double center =
      static_cast<double>(counts.s) / static_cast<double>(counts.n);

  double hi = previous.hi;
  if (hi > center && log_ratio(hi) >= threshold) {
    hi = bisect(log_ratio, threshold, center, hi);
  }
  double lo = previous.lo;
  if (lo < center && log_ratio(lo) >= threshold) {
    lo = bisect(log_ratio, threshold, center, lo);
  }
  // The raw set lies strictly on one side of `previous` only after a
  // coverage failure; keep the nearest remaining point so nesting holds.
  if (previous.hi < center && log_ratio(previous.hi) >= threshold) {
    return {previous.hi, previous.hi};
  }
  if (previous.lo > center && log_ratio(previous.lo) >= threshold) {
    return {previous.lo, previous.lo};
  }
  return {lo, hi};
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie in (0, 1)");
  }
}

}  // namespace

ConfSeqState make_state(double alpha, BetaPosterior prior) {
  validate_alpha(alpha);
  prior.validate();
  ConfSeqState state;
  state.prior = prior;
  state.alpha = alpha;
  return state;
}

ConfSeqState update(const ConfSeqState& state, bool y) {
  ConfSeqState next = state;
  next.counts.n += 1;
  if (y) next.counts.s += 1;
  next.running =
      intersect_with_raw(next.counts, next.alpha, next.prior, state.running);
  return next;
}

double mixture_ratio(const ConfSeqState& state, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw BoundaryEvaluation("mixture ratio is degenerate at p = 0 or p = 1");
  }
  return std::exp(LogRatio(state.counts, state.prior)(p));
}

Interval raw_interval(const BernoulliCounts& counts, double alpha,
                      const BetaPosterior& prior) {
  counts.validate();
  validate_alpha(alpha);
  prior.validate();
  return intersect_with_raw(counts, alpha, prior, Interval{0.0, 1.0});
}

Interval interval(const ConfSeqState& state) { return state.running; }

BoundaryDecision check_stop(const Interval& iv, double epsilon,
                            std::uint64_t at_n) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw InvalidArgument("epsilon must lie in (0, 1/2)");
  }
  if (iv.hi <= epsilon) return {BoundaryKind::PracticalZero, at_n};
  if (iv.lo >= 1.0 - epsilon) return {BoundaryKind::PracticalOne, at_n};
  return {BoundaryKind::Continue, at_n};
}

BoundaryDecision check_stop(const ConfSeqState& state, double epsilon) {
  return check_stop(state.running, epsilon, state.counts.n);
}

}  // namespace boundarylab::confseq
