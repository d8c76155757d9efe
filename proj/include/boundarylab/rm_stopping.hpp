#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boundarylab/confseq.hpp"
#include "boundarylab/random_stream.hpp"

namespace boundarylab::rm {

inline constexpr double kClipLow = 1e-5;
inline constexpr double kClipHigh = 1.0 - 1e-5;

/// Conditional-risk path M_1..M_T. Time indices in this module are 1-based.
struct RiskTrajectory {
  std::vector<double> m;
  std::string scenario_label;

  std::size_t length() const { return m.size(); }
  double at(std::size_t t) const { return m.at(t - 1); }
};

/// Thresholds of the boundary-plus-stability rule. Defaults are the
/// trajectory-study constants.
struct StopConfig {
  double epsilon = 0.02;
  double eta = 0.0008;
  double w = 0.015;
  std::size_t n_min = 10;
  std::size_t h = 5;
  double width_scale = 0.10;

  void validate() const;
};

enum class Rule { BoundaryOnly, BoundaryPlusStability };

struct StopOutcome {
  bool stopped = false;
  std::optional<std::size_t> stop_time;
  Rule rule = Rule::BoundaryOnly;
};

// min(m, 1 - m).
double boundary_distance(double m);

// |M_t - mean(M_{t+1}, ..., M_{t+h})|; empty when t + h > T. With h = 1 this
// is the one-step defect.
std::optional<double> stability_defect(const RiskTrajectory& traj,
                                       std::size_t t, std::size_t h);

// width_scale / sqrt(t).
double width(std::size_t t, const StopConfig& cfg);

// First t with width(t) <= w; no boundary-plus-stability stop can precede it.
std::size_t width_gate(const StopConfig& cfg);

// First t >= n_min with B_t <= epsilon.
StopOutcome tau_boundary_only(const RiskTrajectory& traj, const StopConfig& cfg);

// First t >= n_min with B_t <= epsilon, r_t <= eta and W_t <= w. Indices
// whose defect is undefined never qualify.
StopOutcome tau_rm(const RiskTrajectory& traj, const StopConfig& cfg);

// Noise-free means of the three trajectory scenarios.
double stable_boundary_mean(std::size_t t);
double transient_boundary_mean(std::size_t t);
double interior_stable_mean(std::size_t t);

double clip_risk(double m);

// expit(-1.5 - 0.06 t) + N(0, 0.025^2 / t), clipped.
RiskTrajectory gen_stable_boundary(std::size_t T, RandomStream& rng);
// 0.12 - 0.105 exp(-(t - 50)^2 / 80) + N(0, 0.006^2), clipped.
RiskTrajectory gen_transient_boundary(std::size_t T, RandomStream& rng);
// 0.10 + 0.005 sin(t / 10) + N(0, 0.004^2), clipped.
RiskTrajectory gen_interior_stable(std::size_t T, RandomStream& rng);

// First index at which an interval sequence declares a practical boundary
// (interval inside [0, eps] or [1 - eps, 1]). Indices are 1-based.
confseq::BoundaryDecision first_boundary_declaration(
    std::span<const confseq::Interval> intervals, double epsilon);

// Online form of tau_rm. The defect at t needs M_{t+1..t+h}, so the verdict
// for index t is emitted when M_{t+h} arrives.
class StreamingMonitor {
 public:
  explicit StreamingMonitor(StopConfig cfg);

  // Feeds M_t for the next t. Returns the stop index once the rule fires;
  // afterwards keeps returning it.
  std::optional<std::size_t> push(double m);

  std::size_t observed() const { return observed_; }

 private:
  StopConfig cfg_;
  std::deque<double> window_;
  std::size_t observed_ = 0;
  std::optional<std::size_t> stop_;
};

}  // namespace boundarylab::rm
