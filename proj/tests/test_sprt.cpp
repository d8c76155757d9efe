#include <doctest.h>

#include <cmath>

#include "boundarylab/error.hpp"
#include "boundarylab/random_stream.hpp"
#include "boundarylab/sprt.hpp"

using namespace boundarylab;
using namespace boundarylab::sprt;

namespace {

std::uint64_t iterate_failures(const SprtConfig& cfg) {
  SprtState st;
  while (st.decision == Decision::Continue) st = step(st, cfg, false);
  REQUIRE(st.decision == Decision::AcceptH1);
  return st.n;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(SprtConfig({0.01, 0.01, 0.05, 0.05}).validate(), InvalidArgument);
  CHECK_THROWS_AS(SprtConfig({0.005, 0.01, 0.05, 0.05}).validate(), InvalidArgument);
  CHECK_THROWS_AS(SprtConfig({0.01, 0.005, 0.6, 0.5}).validate(), InvalidArgument);
  CHECK_NOTHROW(SprtConfig{}.validate());
  const SprtConfig cfg;
  CHECK(cfg.lower_boundary() < 0.0);
  CHECK(cfg.upper_boundary() > 0.0);
}

TEST_CASE("all-failure stop time") {
  const SprtConfig cfg{0.01, 0.005, 0.05, 0.05};
  CHECK(all_failure_stop_time(cfg) == 585);
  CHECK(all_failure_stop_time({0.5, 0.25, 0.05, 0.05}) == 8);

  SprtState st;
  for (int i = 0; i < 584; ++i) {
    st = step(st, cfg, false);
    REQUIRE(st.decision == Decision::Continue);
  }
  st = step(st, cfg, false);
  CHECK(st.n == 585);
  CHECK(st.decision == Decision::AcceptH1);
}

TEST_CASE("closed form agrees with iteration on a grid") {
  for (double p0 : {0.5, 0.1, 0.02, 0.01}) {
    for (double ratio : {0.25, 0.5, 0.8}) {
      for (double a : {0.01, 0.05, 0.1}) {
        for (double b : {0.05, 0.2}) {
          const SprtConfig cfg{p0, p0 * ratio, a, b};
          CAPTURE(p0);
          CAPTURE(ratio);
          CHECK(all_failure_stop_time(cfg) == iterate_failures(cfg));
        }
      }
    }
  }
}

TEST_CASE("log-likelihood ratio after failures is exact") {
  const SprtConfig cfg;
  SprtState st;
  for (std::uint64_t n = 1; n <= 500; ++n) {
    st = step(st, cfg, false);
    CHECK(st.llr == static_cast<double>(n) * cfg.failure_increment());
  }
}

TEST_CASE("single success") {
  const SprtConfig cfg;
  const auto st = step(SprtState{}, cfg, true);
  CHECK(st.llr == doctest::Approx(std::log(0.5)));
  CHECK(st.decision == Decision::Continue);
}

TEST_CASE("decided state is frozen") {
  const SprtConfig cfg{0.5, 0.25, 0.05, 0.05};
  SprtState st;
  while (st.decision == Decision::Continue) st = step(st, cfg, false);
  CHECK_THROWS_AS(step(st, cfg, false), FrozenState);
}

TEST_CASE("operating characteristics") {
  const SprtConfig cfg{0.01, 0.005, 0.05, 0.05};
  const std::size_t reps = 20'000;
  const std::uint64_t horizon = 50'000;
  auto run = [&](double p, std::uint64_t setting) {
    std::size_t h1 = 0, h0 = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      auto rng = rng_stream(3, 300, setting, r);
      SprtState st;
      while (st.decision == Decision::Continue && st.n < horizon) {
        st = step(st, cfg, rng.bernoulli(p));
      }
      h1 += st.decision == Decision::AcceptH1 ? 1 : 0;
      h0 += st.decision == Decision::AcceptH0 ? 1 : 0;
    }
    return std::pair{static_cast<double>(h1) / reps, static_cast<double>(h0) / reps};
  };
  const auto [false_h1, true_h0] = run(cfg.p0, 0);
  const auto [true_h1, false_h0] = run(cfg.p1, 1);
  CHECK(false_h1 <= 0.07);
  CHECK(false_h0 <= 0.07);
  const double se = std::sqrt(0.1 * 0.9 / reps);
  CHECK(false_h1 + false_h0 <= cfg.alpha + cfg.beta + 3 * se);
  CHECK(true_h0 > 0.9);
  CHECK(true_h1 > 0.9);
}
