#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "boundarylab/harness/csv.hpp"

namespace boundarylab::harness {

inline constexpr std::uint64_t kDefaultSeed = 20260515;
// Replicate indices reserved for per-setting streams that are not replicates.
inline constexpr std::uint64_t kCalibrationStream = 0xFFFF'FFFF'FFFF'FFF0ULL;
inline constexpr std::uint64_t kTestStream = 0xFFFF'FFFF'FFFF'FFF1ULL;

inline constexpr std::size_t kCalibrationDraws = 250'000;
inline constexpr std::size_t kTestSize = 5'000;

struct StudyConfig {
  int study_id = 1;
  std::size_t replicates = 0;  // 0 selects the study's default
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  bool paper_scale = false;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> data_path;

  // Grid overrides; an empty vector keeps the study's default grid.
  std::vector<double> p_grid;
  std::vector<double> epsilon_grid;
  std::vector<double> rho_grid;
  std::vector<std::size_t> n_grid;
  std::vector<std::size_t> d_grid;

  // Desk-scale defaults: study 1 -> 50,000 (Monte Carlo check), 2 -> 200,
  // 3 -> 100, 4 -> 5,000, 5 -> 200. paper_scale raises 2, 3 and 5 to 1,000.
  std::size_t resolved_replicates() const;
  void validate() const;
};

// ---------------------------------------------------------------- study 1

struct Study1Row {
  double p = 0.0;
  double epsilon = 0.0;
  std::size_t n_max = 0;
  std::uint64_t n_eps = 0;
  double prob_mle_zero = 0.0;
  double prob_tau0 = 0.0;
  double mean_jeffreys = 0.0;
  // Monte Carlo check columns.
  std::size_t mc_reps = 0;
  double mc_prob_mle_zero = 0.0;
  double mc_prob_tau0 = 0.0;
  // Any run of n_eps failures, the count restarting after each success.
  double mc_prob_tau0_any_run = 0.0;
  double mc_mean_jeffreys = 0.0;
  double mc_sd_jeffreys = 0.0;
};

struct Study1Result {
  double alpha = 0.05;
  std::size_t table_n_max = 1000;
  std::vector<Study1Row> rows;
};

Study1Result run_study1(const StudyConfig& cfg);

// ------------------------------------------------------- studies 2, 3 and 5

struct FitRecord {
  bool fitted = false;
  bool converged = false;
  bool unstable = true;
  int iterations = 0;
  double coef_norm = std::numeric_limits<double>::quiet_NaN();
  double max_abs_logit = std::numeric_limits<double>::quiet_NaN();
  double extreme_fraction = std::numeric_limits<double>::quiet_NaN();
  double mean_prob = std::numeric_limits<double>::quiet_NaN();
  double log_loss = std::numeric_limits<double>::quiet_NaN();
  double brier = std::numeric_limits<double>::quiet_NaN();
  double calib_error = std::numeric_limits<double>::quiet_NaN();
};

/// One replicate of a logistic study.
struct StudyRecord {
  std::size_t setting = 0;
  std::size_t replicate = 0;
  std::size_t events = 0;
  bool one_class = false;
  FitRecord mle;
  FitRecord ridge;
};

/// Aggregate over the replicates of one (design, d, rho, n) cell.
struct LogisticCellSummary {
  std::string design;  // study 5 only
  std::size_t d = 0;
  double rho = 0.0;    // target prevalence (studies 2 and 3)
  std::size_t n = 0;
  double beta0 = 0.0;  // calibrated intercept (studies 2 and 3)
  std::size_t reps = 0;
  double mean_events = 0.0;
  double sd_events = 0.0;
  double one_class_rate = 0.0;
  double mle_unstable_rate = 0.0;
  double ridge_unstable_rate = 0.0;
  double mle_nonconverged_rate = 0.0;
  double median_coef_norm_mle = 0.0;
  double median_coef_norm_ridge = 0.0;
  double median_max_logit_mle = 0.0;
  double median_max_logit_ridge = 0.0;
  double mean_extreme_mle = 0.0;
  double mean_extreme_ridge = 0.0;
  double median_log_loss_mle = 0.0;
  double median_log_loss_ridge = 0.0;
  double median_brier_mle = 0.0;
  double median_brier_ridge = 0.0;
  double median_calib_mle = 0.0;
  double median_calib_ridge = 0.0;

  double epv() const { return d > 0 ? mean_events / static_cast<double>(d) : 0.0; }
};

struct LogisticStudyResult {
  int study_id = 2;
  std::vector<LogisticCellSummary> cells;
  std::vector<StudyRecord> records;
};

LogisticStudyResult run_study2(const StudyConfig& cfg);
LogisticStudyResult run_study3(const StudyConfig& cfg);

struct Study5Result {
  bool skipped = false;
  std::string message;
  std::size_t rows = 0;
  std::size_t events = 0;
  double prevalence = 0.0;
  LogisticStudyResult logistic;
};

// Skips with a message when cfg.data_path is unset; throws DataError when
// the file is present but invalid.
Study5Result run_study5(const StudyConfig& cfg);

// ---------------------------------------------------------------- study 4

struct Study4Row {
  std::string scenario;
  std::string rule;
  std::size_t reps = 0;
  double stop_prob = 0.0;
  double mean_time = 0.0;    // NaN when nothing stopped
  double median_time = 0.0;  // NaN when nothing stopped
};

struct Study4Result {
  std::size_t horizon = 120;
  std::vector<Study4Row> rows;
  // Mean path per scenario, index t - 1.
  std::vector<std::string> scenarios;
  std::vector<std::vector<double>> mean_paths;
};

Study4Result run_study4(const StudyConfig& cfg);

// ------------------------------------------------------------ tabulation

std::vector<CsvTable> study1_tables(const Study1Result& result);
std::vector<CsvTable> study2_tables(const LogisticStudyResult& result);
std::vector<CsvTable> study3_tables(const LogisticStudyResult& result);
std::vector<CsvTable> study4_tables(const Study4Result& result);
std::vector<CsvTable> study5_tables(const Study5Result& result);

struct StudyReport {
  int study_id = 0;
  bool skipped = false;
  std::string message;
  std::vector<CsvTable> tables;
};

// Runs the study named by cfg.study_id and formats its tables.
StudyReport run_study(const StudyConfig& cfg);

// Writes every table into cfg.output_dir; returns one summary line each.
std::vector<std::string> write_report(const StudyReport& report,
                                      const std::filesystem::path& dir);

}  // namespace boundarylab::harness
