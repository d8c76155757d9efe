#pragma once

#include <Eigen/Dense>

namespace boundarylab::detail {

enum class LpStatus { Optimal, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  Eigen::VectorXd x;
  int pivots = 0;
};

// Dense tableau simplex for
//
//   maximize c'x  subject to  A x <= b,  x >= 0,
//
// with b >= 0 so the slack basis is feasible from the start. Bland's rule
// picks both the entering and the leaving variable, which rules out cycling
// on the degenerate vertices separation problems are full of.
LpResult maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c, double tol = 1e-9,
                  int max_pivots = 100000);

}  // namespace boundarylab::detail
