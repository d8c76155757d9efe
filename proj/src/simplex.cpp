#include "boundarylab/detail/simplex.hpp"

#include <limits>
#include <vector>

#include "boundarylab/error.hpp"

namespace boundarylab::detail {

LpResult maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c, double tol, int max_pivots) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m || c.size() != n) {
    throw InvalidArgument("LP dimensions do not agree");
  }
  if ((b.array() < 0.0).any()) {
    throw InvalidArgument("LP right-hand side must be nonnegative");
  }

  // Columns: n structural, m slack, then the right-hand side. The last row
  // holds reduced costs; an entry > tol marks an improving column.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = a;
  t.block(0, n, m, m).setIdentity();
  t.topRightCorner(m, 1) = b;
  t.bottomLeftCorner(1, n) = c.transpose();

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  LpResult result;
  const Eigen::Index rhs = n + m;
  while (true) {
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) > tol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) break;

    Eigen::Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double coef = t(i, entering);
      if (coef <= tol) continue;
      const double ratio = t(i, rhs) / coef;
      const auto row_var = basis[static_cast<std::size_t>(i)];
      if (ratio < best_ratio - tol ||
          (ratio <= best_ratio + tol && leaving >= 0 &&
           row_var < basis[static_cast<std::size_t>(leaving)])) {
        best_ratio = std::min(best_ratio, ratio);
        leaving = i;
      }
    }
    if (leaving < 0) {
      result.status = LpStatus::Unbounded;
      return result;
    }
    if (result.pivots >= max_pivots) {
      result.status = LpStatus::IterationLimit;
      break;
    }

    t.row(leaving) /= t(leaving, entering);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leaving) continue;
      const double factor = t(i, entering);
      if (factor != 0.0) t.row(i) -= factor * t.row(leaving);
    }
    basis[static_cast<std::size_t>(leaving)] = entering;
    ++result.pivots;
  }

  result.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto var = basis[static_cast<std::size_t>(i)];
    if (var < n) result.x(var) = t(i, rhs);
  }
  result.value = c.dot(result.x);
  return result;
}

}  // namespace boundarylab::detail
