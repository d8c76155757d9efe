#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "boundarylab/confseq.hpp"
#include "boundarylab/error.hpp"
#include "boundarylab/random_stream.hpp"

using namespace boundarylab;
using namespace boundarylab::confseq;

namespace {

ConfSeqState after_failures(std::uint64_t n, double alpha = 0.05) {
  auto state = make_state(alpha);
  for (std::uint64_t i = 0; i < n; ++i) state = update(state, false);
  return state;
}

}  // namespace

TEST_CASE("fresh state is vacuous") {
  const auto state = make_state(0.05);
  CHECK(interval(state) == Interval{0.0, 1.0});
  CHECK(mixture_ratio(state, 0.3) == 1.0);
  CHECK(check_stop(state, 0.01).kind == BoundaryKind::Continue);
}

TEST_CASE("mixture ratio against direct Beta-function values") {
  auto one = update(make_state(0.05), true);
  CHECK(mixture_ratio(one, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  const auto twenty = after_failures(20);
  CHECK(mixture_ratio(twenty, 0.5) == doctest::Approx(131460.694).epsilon(1e-8));
  CHECK(mixture_ratio(twenty, 0.5) > 20.0);
  CHECK_THROWS_AS(mixture_ratio(twenty, 0.0), BoundaryEvaluation);
  CHECK_THROWS_AS(mixture_ratio(twenty, 1.0), BoundaryEvaluation);
}

TEST_CASE("upper endpoint after failures matches the bisection oracle") {
  const struct {
    std::uint64_t n;
    double upper;
  } cases[] = {{100, 0.0570285976}, {200, 0.0306110985}, {400, 0.0162764386},
               {598, 0.0112491290}};
  for (const auto& c : cases) {
    const auto iv = interval(after_failures(c.n));
    CAPTURE(c.n);
    CHECK(iv.lo == 0.0);
    CHECK(iv.hi == doctest::Approx(c.upper).epsilon(1e-8));
    CHECK(iv.hi >= c.upper - 1e-9);  // reported endpoint errs outward
  }
  CHECK(interval(after_failures(598)).hi < 0.012);
}

TEST_CASE("running interval is nested") {
  auto rng = rng_stream(11, 200, 0, 0);
  auto state = make_state(0.05);
  Interval previous = interval(state);
  for (int i = 0; i < 3000; ++i) {
    state = update(state, rng.bernoulli(0.03));
    const auto iv = interval(state);
    CHECK(iv.lo >= previous.lo);
    CHECK(iv.hi <= previous.hi);
    CHECK(iv.lo <= iv.hi);
    previous = iv;
  }
  CHECK(interval(after_failures(200)).hi >= interval(after_failures(400)).hi);
}

TEST_CASE("per-time set depends only on the counts") {
  auto rng = rng_stream(12, 200, 0, 0);
  std::vector<bool> ys(400);
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = rng.bernoulli(0.2);
  auto forward = make_state(0.05);
  auto backward = make_state(0.05);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    forward = update(forward, ys[i]);
    backward = update(backward, ys[ys.size() - 1 - i]);
  }
  CHECK(forward.counts.n == backward.counts.n);
  CHECK(forward.counts.s == backward.counts.s);
  CHECK(raw_interval(forward.counts, 0.05) == raw_interval(backward.counts, 0.05));
  // Both running intervals lie inside the shared final per-time set.
  const auto raw = raw_interval(forward.counts, 0.05);
  CHECK(interval(forward).lo >= raw.lo);
  CHECK(interval(backward).hi <= raw.hi);
}

TEST_CASE("raw interval brackets the likelihood-ratio level set") {
  for (std::uint64_t n : {5u, 50u, 500u}) {
    for (std::uint64_t s : {std::uint64_t{0}, n / 3, n}) {
      const auto iv = raw_interval({n, s}, 0.05);
      ConfSeqState st = make_state(0.05);
      st.counts = {n, s};
      const double inside = std::clamp((s + 0.5) / (n + 1.0), 1e-6, 1 - 1e-6);
      CHECK(iv.contains(inside));
      if (iv.hi < 1.0) CHECK(mixture_ratio(st, std::min(iv.hi, 1 - 1e-12)) >= 20.0 * (1 - 1e-6));
      if (iv.lo > 0.0) CHECK(mixture_ratio(st, std::max(iv.lo, 1e-12)) >= 20.0 * (1 - 1e-6));
    }
  }
}

TEST_CASE("boundary decisions") {
  CHECK(check_stop(Interval{0.0, 0.004}, 0.005).kind == BoundaryKind::PracticalZero);
  CHECK(check_stop(Interval{0.02, 0.9}, 0.01).kind == BoundaryKind::Continue);
  CHECK(check_stop(Interval{0.996, 1.0}, 0.005).kind == BoundaryKind::PracticalOne);
  CHECK(check_stop(Interval{0.0, 0.005}, 0.005).kind == BoundaryKind::PracticalZero);
  CHECK_THROWS_AS(check_stop(Interval{0.0, 0.1}, 0.5), InvalidArgument);
  // 598 failures at eps = 0.012 declares practical zero.
  const auto st = after_failures(598);
  const auto d = check_stop(st, 0.012);
  CHECK(d.kind == BoundaryKind::PracticalZero);
  CHECK(d.at_n == 598);
}

TEST_CASE("practical-one declarations mirror practical-zero ones") {
  auto zeros = make_state(0.05);
  auto ones = make_state(0.05);
  for (int i = 0; i < 700; ++i) {
    zeros = update(zeros, false);
    ones = update(ones, true);
    CHECK(interval(ones).lo == doctest::Approx(1.0 - interval(zeros).hi).epsilon(1e-9));
  }
  CHECK(check_stop(ones, 0.012).kind == BoundaryKind::PracticalOne);
}
