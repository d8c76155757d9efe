#include "boundarylab/sprt.hpp"

#include <algorithm>
#include <cmath>

#include "boundarylab/error.hpp"

namespace boundarylab::sprt {

void SprtConfig::validate() const {
  if (!(p1 > 0.0 && p0 < 1.0)) {
    throw InvalidArgument("SPRT hypotheses must lie strictly inside (0, 1)");
  }
  if (!(p1 < p0)) {
    throw InvalidArgument("SPRT requires p1 < p0");
  }
  if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0)) {
    throw InvalidArgument("SPRT error levels must lie in (0, 1)");
  }
  if (!(alpha + beta < 1.0)) {
    throw InvalidArgument("SPRT requires alpha + beta < 1");
  }
}

double SprtConfig::lower_boundary() const { return std::log(beta / (1.0 - alpha)); }
double SprtConfig::upper_boundary() const { return std::log((1.0 - beta) / alpha); }
double SprtConfig::success_increment() const { return std::log(p1 / p0); }
double SprtConfig::failure_increment() const {
  return std::log1p(-p1) - std::log1p(-p0);
}

SprtState step(const SprtState& state, const SprtConfig& cfg, bool y) {
  if (state.decision != Decision::Continue) {
    throw FrozenState("SPRT already reached a decision");
  }
  SprtState next = state;
  next.n += 1;
  if (y) next.successes += 1;
  const auto failures = static_cast<double>(next.n - next.successes);
  next.llr = static_cast<double>(next.successes) * cfg.success_increment() +
             failures * cfg.failure_increment();
  if (next.llr >= cfg.upper_boundary()) {
    next.decision = Decision::AcceptH1;
  } else if (next.llr <= cfg.lower_boundary()) {
    next.decision = Decision::AcceptH0;
  }
  return next;
}

std::uint64_t all_failure_stop_time(const SprtConfig& cfg) {
  cfg.validate();
  const double upper = cfg.upper_boundary();
  const double inc = cfg.failure_increment();
  auto n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(upper / inc)));
  auto crosses = [&](std::uint64_t k) {
    return static_cast<double>(k) * inc >= upper;
  };
  while (n > 1 && crosses(n - 1)) --n;
  while (!crosses(n)) ++n;
  return n;
}

}  // namespace boundarylab::sprt
