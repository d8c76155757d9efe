#include "boundarylab/rm_stopping.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "boundarylab/error.hpp"
#include "boundarylab/logistic.hpp"

namespace boundarylab::rm {

namespace {

// Shared by the batch and streaming paths so both see bit-identical values.
template <typename It>
double defect_from(double current, It future_begin, It future_end) {
  double total = 0.0;
  std::size_t count = 0;
  for (auto it = future_begin; it != future_end; ++it, ++count) total += *it;
  return std::abs(current - total / static_cast<double>(count));
}

bool rm_conditions_hold(double m, double defect, std::size_t t,
                        const StopConfig& cfg) {
  return boundary_distance(m) <= cfg.epsilon && defect <= cfg.eta &&
         width(t, cfg) <= cfg.w;
}

template <typename Mean, typename NoiseSd>
RiskTrajectory generate(std::size_t T, RandomStream& rng, Mean mean,
                        NoiseSd noise_sd, std::string label) {
  RiskTrajectory traj;
  traj.scenario_label = std::move(label);
  traj.m.reserve(T);
  for (std::size_t t = 1; t <= T; ++t) {
    const double noise = noise_sd(t) * rng.normal();
    traj.m.push_back(clip_risk(mean(t) + noise));
  }
  return traj;
}

}  // namespace

void StopConfig::validate() const {
  if (!(epsilon > 0.0 && eta > 0.0 && w > 0.0 && width_scale > 0.0)) {
    throw InvalidArgument("stop thresholds must be positive");
  }
  if (n_min < 1 || h < 1) {
    throw InvalidArgument("n_min and h must be at least 1");
  }
}

double boundary_distance(double m) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw InvalidArgument("conditional risk must lie in [0, 1]");
  }
  return std::min(m, 1.0 - m);
}

std::optional<double> stability_defect(const RiskTrajectory& traj,
                                       std::size_t t, std::size_t h) {
  if (t < 1 || h < 1) throw InvalidArgument("t and h must be at least 1");
  if (t + h > traj.length()) return std::nullopt;
  const auto begin = traj.m.begin() + static_cast<std::ptrdiff_t>(t);
  return defect_from(traj.at(t), begin, begin + static_cast<std::ptrdiff_t>(h));
}

double width(std::size_t t, const StopConfig& cfg) {
  if (t < 1) throw InvalidArgument("width is defined for t >= 1");
  return cfg.width_scale / std::sqrt(static_cast<double>(t));
}

std::size_t width_gate(const StopConfig& cfg) {
  const double ratio = cfg.width_scale / cfg.w;
  auto t = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio * ratio)));
  while (t > 1 && width(t - 1, cfg) <= cfg.w) --t;
  while (width(t, cfg) > cfg.w) ++t;
  return t;
}

StopOutcome tau_boundary_only(const RiskTrajectory& traj, const StopConfig& cfg) {
  cfg.validate();
  StopOutcome out;
  out.rule = Rule::BoundaryOnly;
  for (std::size_t t = cfg.n_min; t <= traj.length(); ++t) {
    if (boundary_distance(traj.at(t)) <= cfg.epsilon) {
      out.stopped = true;
      out.stop_time = t;
      break;
    }
  }
  return out;
}

StopOutcome tau_rm(const RiskTrajectory& traj, const StopConfig& cfg) {
  cfg.validate();
  StopOutcome out;
  out.rule = Rule::BoundaryPlusStability;
  for (std::size_t t = cfg.n_min; t + cfg.h <= traj.length(); ++t) {
    const auto defect = stability_defect(traj, t, cfg.h);
    if (rm_conditions_hold(traj.at(t), *defect, t, cfg)) {
      out.stopped = true;
      out.stop_time = t;
      break;
    }
  }
  return out;
}

double stable_boundary_mean(std::size_t t) {
  return logistic::expit(-1.5 - 0.06 * static_cast<double>(t));
}

double transient_boundary_mean(std::size_t t) {
  const double d = static_cast<double>(t) - 50.0;
  return 0.12 - 0.105 * std::exp(-d * d / 80.0);
}

double interior_stable_mean(std::size_t t) {
  return 0.10 + 0.005 * std::sin(static_cast<double>(t) / 10.0);
}

double clip_risk(double m) { return std::clamp(m, kClipLow, kClipHigh); }

RiskTrajectory gen_stable_boundary(std::size_t T, RandomStream& rng) {
  return generate(
      T, rng, stable_boundary_mean,
      [](std::size_t t) { return 0.025 / std::sqrt(static_cast<double>(t)); },
      "stable boundary");
}

RiskTrajectory gen_transient_boundary(std::size_t T, RandomStream& rng) {
  return generate(
      T, rng, transient_boundary_mean, [](std::size_t) { return 0.006; },
      "transient boundary");
}

RiskTrajectory gen_interior_stable(std::size_t T, RandomStream& rng) {
  return generate(
      T, rng, interior_stable_mean, [](std::size_t) { return 0.004; },
      "interior stable");
}

confseq::BoundaryDecision first_boundary_declaration(
    std::span<const confseq::Interval> intervals, double epsilon) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto decision = confseq::check_stop(intervals[i], epsilon, i + 1);
    if (decision.kind != confseq::BoundaryKind::Continue) return decision;
  }
  return {confseq::BoundaryKind::Continue, intervals.size()};
}

StreamingMonitor::StreamingMonitor(StopConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::optional<std::size_t> StreamingMonitor::push(double m) {
  ++observed_;
  if (stop_) return stop_;
  window_.push_back(m);
  if (window_.size() > cfg_.h + 1) window_.pop_front();
  if (window_.size() < cfg_.h + 1) return std::nullopt;
  const std::size_t t = observed_ - cfg_.h;
  if (t < cfg_.n_min) return std::nullopt;
  const double defect =
      defect_from(window_.front(), std::next(window_.begin()), window_.end());
  if (rm_conditions_hold(window_.front(), defect, t, cfg_)) stop_ = t;
  return stop_;
}

}  // namespace boundarylab::rm
