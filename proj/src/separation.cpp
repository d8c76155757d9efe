#include "boundarylab/separation.hpp"

#include "boundarylab/detail/simplex.hpp"
#include "boundarylab/error.hpp"

namespace boundarylab::logistic {

namespace {

// Rows of the signed design (2y_i - 1) x_i.
Matrix signed_rows(const Design& design) {
  Matrix a = design.augmented();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (design.y(i) < 0.5) a.row(i) *= -1.0;
  }
  return a;
}

// The free direction a is split as u - v with 0 <= u, v <= 1, which keeps
// the origin feasible and |a_j| <= 1.
Matrix box_rows(Eigen::Index p) { return Matrix::Identity(2 * p, 2 * p); }

Vector direction_from(const Vector& x, Eigen::Index p) {
  return x.head(p) - x.segment(p, p);
}

}  // namespace

SeparationReport detect_separation(const Design& design) {
  design.validate();
  if (design.one_class()) {
    throw OneClassError("separation is undefined for a single-class design");
  }
  const Matrix signed_x = signed_rows(design);
  const Eigen::Index n = signed_x.rows();
  const Eigen::Index p = signed_x.cols();

  // Variables [u, v, t]; rows: t - s_i x_i'(u - v) <= 0, then the box.
  {
    Matrix a = Matrix::Zero(n + 2 * p, 2 * p + 1);
    a.block(0, 0, n, p) = -signed_x;
    a.block(0, p, n, p) = signed_x;
    a.block(0, 2 * p, n, 1).setOnes();
    a.block(n, 0, 2 * p, 2 * p) = box_rows(p);
    Vector b = Vector::Zero(n + 2 * p);
    b.tail(2 * p).setOnes();
    Vector c = Vector::Zero(2 * p + 1);
    c(2 * p) = 1.0;

    const auto lp = detail::maximize(a, b, c, kSeparationTolerance);
    if (lp.status == detail::LpStatus::Optimal && lp.value > kSeparationTolerance) {
      SeparationReport report;
      report.kind = SeparationKind::Complete;
      report.direction = direction_from(lp.x, p);
      report.margin = (signed_x * report.direction).minCoeff();
      return report;
    }
  }

  // Variables [u, v]; rows: -s_i x_i'(u - v) <= 0, then the box.
  Matrix a = Matrix::Zero(n + 2 * p, 2 * p);
  a.block(0, 0, n, p) = -signed_x;
  a.block(0, p, n, p) = signed_x;
  a.block(n, 0, 2 * p, 2 * p) = box_rows(p);
  Vector b = Vector::Zero(n + 2 * p);
  b.tail(2 * p).setOnes();
  Vector c(2 * p);
  const Vector column_sums = signed_x.colwise().sum().transpose();
  c.head(p) = column_sums;
  c.tail(p) = -column_sums;

  const auto lp = detail::maximize(a, b, c, kSeparationTolerance);
  SeparationReport report;
  if (lp.status == detail::LpStatus::Optimal && lp.value > kSeparationTolerance) {
    report.kind = SeparationKind::QuasiComplete;
    report.direction = direction_from(lp.x, p);
    report.margin = (signed_x * report.direction).minCoeff();
  } else {
    report.direction = Vector::Zero(p);
    report.margin = 0.0;
  }
  return report;
}

}  // namespace boundarylab::logistic
