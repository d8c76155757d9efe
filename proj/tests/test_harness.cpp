#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "boundarylab/bernoulli_rules.hpp"
#include "boundarylab/error.hpp"
#include "boundarylab/harness/csv.hpp"
#include "boundarylab/harness/hie_data.hpp"
#include "boundarylab/harness/metrics.hpp"
#include "boundarylab/harness/studies.hpp"
#include "boundarylab/random_stream.hpp"

using namespace boundarylab;
using namespace boundarylab::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("boundarylab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> render_all(const StudyReport& report) {
  std::vector<std::string> out;
  for (const auto& t : report.tables) out.push_back(t.name + "\n" + t.render());
  return out;
}

}  // namespace

TEST_CASE("metric examples") {
  const std::vector<double> y = {1, 0, 1, 0};
  CHECK(log_loss(y, y) == doctest::Approx(1e-12).epsilon(1e-3));
  const std::vector<double> half(4, 0.5);
  CHECK(log_loss(y, half) == doctest::Approx(std::log(2.0)));
  CHECK(brier(y, half) == doctest::Approx(0.25));
  const std::vector<double> one = {1.0}, zero = {0.0};
  CHECK(log_loss(one, zero) == doctest::Approx(27.631021115928547));
  CHECK(calib_error(y, half) == doctest::Approx(0.0));
  const std::vector<double> p = {0.05, 0.05, 0.95, 0.95};
  const std::vector<double> yy = {0, 0, 0, 0};
  CHECK(calib_error(yy, p) == doctest::Approx(0.5));
  CHECK_THROWS(log_loss(y, one));
}

TEST_CASE("summary statistics skip non-finite entries") {
  const double nan = std::nan("");
  CHECK(median({3.0, nan, 1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == doctest::Approx(2.5));
  CHECK(std::isnan(median({nan})));
  const std::vector<double> v = {1.0, 2.0, nan, 3.0};
  CHECK(mean(v) == doctest::Approx(2.0));
  const std::vector<double> w = {1.0, 2.0, 3.0, 4.0};
  CHECK(sample_sd(w) == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("random streams are deterministic and separated") {
  auto a = rng_stream(7, 1, 2, 3);
  auto b = rng_stream(7, 1, 2, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  CHECK(derive_seed(7, 1, 2, 3) != derive_seed(7, 1, 2, 4));
  CHECK(derive_seed(7, 1, 2, 3) != derive_seed(7, 1, 3, 3));
  CHECK(derive_seed(7, 1, 2, 3) != derive_seed(7, 2, 2, 3));
  CHECK(derive_seed(7, 1, 2, 3) != derive_seed(8, 1, 2, 3));
  CHECK(derive_seed(7, 1, 2, kCalibrationStream) != derive_seed(7, 1, 2, kTestStream));
}

TEST_CASE("csv formatting") {
  CHECK(fmt_fixed(0.12345, 3) == "0.123");
  CHECK(fmt_fixed(-0.0001, 3) == "0.000");
  CHECK(fmt_fixed(std::nan(""), 3) == "--");
  CHECK(fmt_sig(4.317e-5, 4) == "4.317e-05");
  CHECK(fmt_int(299) == "299");
  CsvTable t{"x.csv", {"a", "b"}, {}};
  t.add_row({"1", "2"});
  CHECK(t.render() == "a,b\n1,2\n");
  CHECK_THROWS_AS(t.add_row({"1"}), InvalidArgument);
  const auto dir = scratch_dir("csv");
  const auto path = t.write(dir / "nested");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "a,b\n1,2\n");
}

TEST_CASE("data loader errors") {
  const auto dir = scratch_dir("hie");
  CHECK_THROWS_AS(load_hie_csv(dir / "missing.csv"), DataError);

  {
    std::ofstream(dir / "nocol.csv") << "lncoins,idp,lpi,fmde,physlm,hlthp\n0,1,2,3,4,0\n";
  }
  CHECK_THROWS_WITH_AS(load_hie_csv(dir / "nocol.csv"), doctest::Contains("disea"), DataError);

  {
    std::ofstream(dir / "bad.csv") << "lncoins,idp,lpi,fmde,physlm,disea,hlthp\n"
                                   << "0,1,2,3,4,abc,0\n";
  }
  CHECK_THROWS_AS(load_hie_csv(dir / "bad.csv"), DataError);

  {
    std::ofstream(dir / "outcome.csv") << "lncoins,idp,lpi,fmde,physlm,disea,hlthp\n"
                                       << "0,1,2,3,4,5,2\n";
  }
  CHECK_THROWS_AS(load_hie_csv(dir / "outcome.csv"), DataError);

  {
    std::ofstream(dir / "toy.csv") << "extra,lncoins,idp,lpi,fmde,physlm,disea,hlthp\n"
                                   << "9,0,1,2,3,4,5,0\n"
                                   << "9,1,0,2,3,4,6,1\n"
                                   << "9,2,1,3,3,5,7,0\n";
  }
  const auto toy = load_hie_csv(dir / "toy.csv");
  CHECK(toy.rows.size() == 3);
  CHECK(toy.events() == 1);
  CHECK(toy.rows[1].covariates[5] == 6.0);
  CHECK_THROWS_WITH_AS(validate_full_hie(toy), doctest::Contains("expected 20190 rows"),
                       DataError);
  // fmde is constant in the toy file.
  CHECK_THROWS_WITH_AS(standardized_base(toy), doctest::Contains("fmde"), DataError);
}

TEST_CASE("quadratic design") {
  HieData data;
  auto rng = rng_stream(5, 0, 0, 0);
  for (int i = 0; i < 50; ++i) {
    HieRow row;
    for (auto& c : row.covariates) c = rng.normal();
    row.hlthp = i % 7 == 0 ? 1.0 : 0.0;
    data.rows.push_back(row);
  }
  const auto base = standardized_base(data);
  REQUIRE(base.cols() == 6);
  for (int j = 0; j < 6; ++j) {
    CHECK(base.col(j).mean() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((base.col(j).array().square().mean()) == doctest::Approx(1.0));
  }
  const auto quad = quadratic_design(base);
  REQUIRE(quad.cols() == 27);
  CHECK((quad.col(6) - base.col(0).cwiseProduct(base.col(0))).norm() == doctest::Approx(0.0));
  CHECK((quad.col(12) - base.col(0).cwiseProduct(base.col(1))).norm() == doctest::Approx(0.0));
  CHECK((quad.col(26) - base.col(4).cwiseProduct(base.col(5))).norm() == doctest::Approx(0.0));
  CHECK(hie_outcomes(data).sum() == doctest::Approx(8.0));
}

TEST_CASE("study configuration validation") {
  StudyConfig cfg;
  cfg.study_id = 6;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.study_id = 1;
  cfg.epsilon_grid = {0.5};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.epsilon_grid = {};
  cfg.rho_grid = {1.0};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  StudyConfig defaults;
  for (int id = 1; id <= 5; ++id) {
    defaults.study_id = id;
    CHECK(defaults.resolved_replicates() > 0);
  }
  defaults.study_id = 2;
  defaults.paper_scale = true;
  CHECK(defaults.resolved_replicates() == 1000);
}

TEST_CASE("study 1 Monte Carlo agrees with the exact columns") {
  StudyConfig cfg;
  cfg.study_id = 1;
  cfg.replicates = 20000;
  cfg.p_grid = {0.01, 0.005};
  cfg.threads = 2;
  const auto result = run_study1(cfg);
  REQUIRE(!result.rows.empty());
  const double r = 20000.0;
  for (const auto& row : result.rows) {
    const double se0 = std::sqrt(row.prob_mle_zero * (1 - row.prob_mle_zero) / r);
    CHECK(std::abs(row.mc_prob_mle_zero - row.prob_mle_zero) <= 3 * se0 + 1e-12);
    const double se1 = std::sqrt(row.prob_tau0 * (1 - row.prob_tau0) / r);
    CHECK(std::abs(row.mc_prob_tau0 - row.prob_tau0) <= 3 * se1 + 1e-12);
    CHECK(row.mc_prob_tau0_any_run >= row.mc_prob_tau0);
    const double sej = row.mc_sd_jeffreys / std::sqrt(r);
    CHECK(std::abs(row.mc_mean_jeffreys - row.mean_jeffreys) <= 3 * sej + 1e-12);
  }
}

TEST_CASE("one-class rate matches the all-failure probability") {
  StudyConfig cfg;
  cfg.study_id = 2;
  cfg.replicates = 400;
  cfg.rho_grid = {0.01};
  cfg.n_grid = {50};
  cfg.threads = 2;
  const auto result = run_study2(cfg);
  REQUIRE(result.cells.size() == 1);
  const auto& cell = result.cells.front();
  const double expected = std::pow(0.99, 50);
  const double se = std::sqrt(expected * (1 - expected) / 400.0);
  CHECK(std::abs(cell.one_class_rate - expected) <= 4 * se);
  CHECK(cell.mean_events == doctest::Approx(0.5).epsilon(0.3));
  for (const auto& rec : result.records) {
    if (rec.one_class) {
      CHECK_FALSE(rec.mle.fitted);
      CHECK_FALSE(rec.ridge.fitted);
      CHECK(rec.mle.unstable);
    }
  }
}

TEST_CASE("studies are identical across thread counts") {
  auto small = [](int id, unsigned threads) {
    StudyConfig cfg;
    cfg.study_id = id;
    cfg.threads = threads;
    switch (id) {
      case 1: cfg.replicates = 500; break;
      case 2: cfg.replicates = 6; cfg.rho_grid = {0.1, 0.01}; cfg.n_grid = {50, 200}; break;
      case 3: cfg.replicates = 3; cfg.d_grid = {20}; cfg.rho_grid = {0.01}; cfg.n_grid = {500}; break;
      case 4: cfg.replicates = 200; break;
      default: break;
    }
    return render_all(run_study(cfg));
  };
  for (int id = 1; id <= 4; ++id) {
    CAPTURE(id);
    const auto one = small(id, 1);
    CHECK(small(id, 2) == one);
    CHECK(small(id, 8) == one);
  }
}

TEST_CASE("study 5 without a data file is skipped") {
  StudyConfig cfg;
  cfg.study_id = 5;
  const auto report = run_study(cfg);
  CHECK(report.skipped);
  CHECK(report.tables.empty());
  CHECK(report.message.find("--data") != std::string::npos);
  cfg.data_path = "/nonexistent/file.csv";
  CHECK_THROWS_AS(run_study(cfg), DataError);
}

TEST_CASE("study 4 table layout") {
  StudyConfig cfg;
  cfg.study_id = 4;
  cfg.replicates = 100;
  const auto report = run_study(cfg);
  REQUIRE(!report.tables.empty());
  const auto& t = report.tables.front();
  CHECK(t.name == "table4.csv");
  CHECK(t.rows.size() == 6);
  const auto dir = scratch_dir("report");
  const auto lines = write_report(report, dir);
  CHECK(lines.size() == report.tables.size());
  CHECK(lines.front().rfind("study4: wrote ", 0) == 0);
  CHECK(fs::exists(dir / "table4.csv"));
}
