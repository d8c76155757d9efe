#pragma once

#include "boundarylab/logistic.hpp"

namespace boundarylab::logistic {

enum class SeparationKind { None, QuasiComplete, Complete };

struct SeparationReport {
  SeparationKind kind = SeparationKind::None;
  // Separating direction over the augmented design (intercept first); zero
  // when kind is None.
  Vector direction;
  // Smallest signed margin (2y_i - 1) x_i'direction achieved by the LP.
  double margin = 0.0;
};

inline constexpr double kSeparationTolerance = 1e-9;

// Decides whether a direction a with (2y_i - 1) x_i'a > 0 for every row
// exists (complete separation), or one with >= 0 everywhere, strict
// somewhere and equality somewhere (quasi-complete).
//
// Complete: maximize t s.t. (2y_i - 1) x_i'a >= t, |a_j| <= 1. A positive
// optimum means the classes are strictly separable.
// Quasi-complete: maximize sum_i (2y_i - 1) x_i'a s.t. every term >= 0,
// |a_j| <= 1. A positive optimum gives a nonzero weak separator; directions
// with x_i'a = 0 on every row (collinear designs) do not count.
//
// Throws OneClassError for a single-class design.
SeparationReport detect_separation(const Design& design);

}  // namespace boundarylab::logistic
