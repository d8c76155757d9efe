#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace boundarylab::harness {

inline constexpr std::array<const char*, 6> kHieCovariates = {
    "lncoins", "idp", "lpi", "fmde", "physlm", "disea"};
inline constexpr const char* kHieOutcome = "hlthp";
inline constexpr std::size_t kHieRows = 20190;
inline constexpr std::size_t kHieEvents = 302;

struct HieRow {
  std::array<double, 6> covariates{};  // order of kHieCovariates
  double hlthp = 0.0;
};

struct HieData {
  std::vector<HieRow> rows;

  std::size_t events() const;
  double prevalence() const;
};

// Reads a comma-separated file whose header names at least the six
// covariates and hlthp (extra columns are ignored). Throws DataError with
// the expected schema on any problem.
HieData load_hie_csv(const std::filesystem::path& path);

// Throws DataError unless the data have exactly 20,190 rows and 302 events.
void validate_full_hie(const HieData& data);

// Column-standardized base covariates (n x 6), using population mean and
// standard deviation over all rows. Throws DataError on a zero-variance
// column.
Eigen::MatrixXd standardized_base(const HieData& data);

// 6 standardized columns, their 6 squares, and the 15 pairwise products.
Eigen::MatrixXd quadratic_design(const Eigen::MatrixXd& base);

Eigen::VectorXd hie_outcomes(const HieData& data);

}  // namespace boundarylab::harness
