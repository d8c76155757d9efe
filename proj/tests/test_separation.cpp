#include <doctest.h>

#include <algorithm>
#include <vector>

#include "boundarylab/detail/simplex.hpp"
#include "boundarylab/random_stream.hpp"
#include "boundarylab/separation.hpp"

using namespace boundarylab;
using namespace boundarylab::logistic;

namespace {

Design one_d(std::initializer_list<double> xs, std::initializer_list<double> ys) {
  Design d;
  d.x = Matrix(static_cast<Eigen::Index>(xs.size()), 1);
  d.y = Vector(static_cast<Eigen::Index>(ys.size()));
  Eigen::Index i = 0;
  for (double x : xs) d.x(i++, 0) = x;
  i = 0;
  for (double y : ys) d.y(i++) = y;
  return d;
}

// Exhaustive search over integer slope directions. For a slope w the
// intercept is free, so separation reduces to comparing the projected
// class ranges. With coordinates in [-3, 3] every strictly separating cone
// contains an integer direction with entries in [-12, 12].
SeparationKind brute_force(const Design& d) {
  bool weak = false;
  for (int w1 = -12; w1 <= 12; ++w1) {
    for (int w2 = -12; w2 <= 12; ++w2) {
      if (w1 == 0 && w2 == 0) continue;
      double max0 = -1e300, min1 = 1e300, lo = 1e300, hi = -1e300;
      for (Eigen::Index i = 0; i < d.rows(); ++i) {
        const double z = w1 * d.x(i, 0) + w2 * d.x(i, 1);
        lo = std::min(lo, z);
        hi = std::max(hi, z);
        if (d.y(i) > 0.5) {
          min1 = std::min(min1, z);
        } else {
          max0 = std::max(max0, z);
        }
      }
      if (max0 < min1) return SeparationKind::Complete;
      if (max0 <= min1 && lo < hi) weak = true;
    }
  }
  return weak ? SeparationKind::QuasiComplete : SeparationKind::None;
}

Design random_grid_design(RandomStream& rng) {
  const auto n = 2 + static_cast<Eigen::Index>(rng.uniform() * 11);
  Design d;
  d.x = Matrix(n, 2);
  d.y = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.x(i, 0) = std::floor(rng.uniform() * 7) - 3;
    d.x(i, 1) = std::floor(rng.uniform() * 7) - 3;
    d.y(i) = rng.bernoulli(0.5) ? 1.0 : 0.0;
  }
  if (d.one_class()) d.y(0) = 1.0 - d.y(0);
  return d;
}

std::vector<Design> grid_corpus(std::size_t count) {
  auto rng = rng_stream(31, 500, 0, 0);
  std::vector<Design> corpus;
  for (std::size_t k = 0; k < count; ++k) corpus.push_back(random_grid_design(rng));
  return corpus;
}

void check_certificate(const Design& d, const SeparationReport& r) {
  const Vector margins =
      (2.0 * d.y.array() - 1.0).matrix().cwiseProduct(d.augmented() * r.direction);
  if (r.kind == SeparationKind::Complete) {
    CHECK(margins.minCoeff() > kSeparationTolerance);
  } else if (r.kind == SeparationKind::QuasiComplete) {
    CHECK(margins.minCoeff() >= -kSeparationTolerance);
    CHECK(margins.maxCoeff() > kSeparationTolerance);
  } else {
    CHECK(r.direction.isZero());
  }
}

}  // namespace

TEST_CASE("separation on one-dimensional designs") {
  const auto complete = one_d({-1.0, -0.5, 0.5, 1.0}, {0, 0, 1, 1});
  CHECK(detect_separation(complete).kind == SeparationKind::Complete);
  const auto interleaved = one_d({-1.0, 1.0, -0.5, 0.5}, {0, 0, 1, 1});
  CHECK(detect_separation(interleaved).kind == SeparationKind::None);
  const auto tied = one_d({-1.0, 0.0, 0.0, 1.0}, {0, 0, 1, 1});
  const auto report = detect_separation(tied);
  CHECK(report.kind == SeparationKind::QuasiComplete);
  check_certificate(tied, report);
}

TEST_CASE("separation detector equals the brute-force oracle on 2-D designs") {
  const auto corpus = grid_corpus(3000);
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& d = corpus[k];
    const auto report = detect_separation(d);
    CAPTURE(k);
    CHECK(report.kind == brute_force(d));
    check_certificate(d, report);
    ++counts[static_cast<int>(report.kind)];
  }
  // The corpus exercises every outcome.
  CHECK(counts[0] > 100);
  CHECK(counts[1] > 20);
  CHECK(counts[2] > 100);
}

TEST_CASE("ridge stays finite and the MLE diverges on completely separated designs") {
  const auto corpus = grid_corpus(3000);
  std::size_t complete = 0;
  for (const auto& d : corpus) {
    if (detect_separation(d).kind != SeparationKind::Complete) continue;
    ++complete;
    for (double lambda : {0.1, 1.0}) {
      const auto f = fit(d, {lambda, false}, 100, 1e-8);
      CHECK(f.converged);
      CHECK(f.coef_norm < 50.0);
      CHECK(f.beta.allFinite());
    }
    const auto mle = fit(d, {0.0, false}, 200, 1e-8);
    CHECK((!mle.converged || mle.max_abs_logit > 30.0));
  }
  CHECK(complete > 100);
}

TEST_CASE("dense simplex") {
  // maximize 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3.
  Eigen::MatrixXd a(3, 2);
  a << 1, 1, 1, 3, 1, 0;
  Eigen::VectorXd b(3), c(2);
  b << 4, 6, 3;
  c << 3, 2;
  const auto r = detail::maximize(a, b, c);
  CHECK(r.status == detail::LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(11.0));
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(1) == doctest::Approx(1.0));

  Eigen::MatrixXd open(1, 2);
  open << 1, -1;
  Eigen::VectorXd rhs(1), obj(2);
  rhs << 1;
  obj << 0, 1;
  CHECK(detail::maximize(open, rhs, obj).status == detail::LpStatus::Unbounded);
}
