#include "boundarylab/harness/hie_data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string_view>

#include "boundarylab/error.hpp"

namespace boundarylab::harness {

namespace {

std::string schema_hint() {
  std::string hint = "expected a CSV header containing columns";
  for (const char* name : kHieCovariates) {
    hint += ' ';
    hint += name;
  }
  hint += " and ";
  hint += kHieOutcome;
  return hint;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::size_t HieData::events() const {
  std::size_t count = 0;
  for (const auto& row : rows) count += row.hlthp > 0.5 ? 1 : 0;
  return count;
}

double HieData::prevalence() const {
  if (rows.empty()) return 0.0;
  return static_cast<double>(events()) / static_cast<double>(rows.size());
}

HieData load_hie_csv(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) {
    throw DataError("cannot open data file " + path.string() + "; " +
                    schema_hint());
  }
  std::string line;
  if (!std::getline(file, line)) {
    throw DataError("data file " + path.string() + " is empty; " + schema_hint());
  }
  const auto header = split(line);
  std::array<std::size_t, 7> index{};
  auto locate = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw DataError("missing column '" + std::string(name) + "'; " +
                    schema_hint());
  };
  for (std::size_t j = 0; j < kHieCovariates.size(); ++j) {
    index[j] = locate(kHieCovariates[j]);
  }
  index[6] = locate(kHieOutcome);

  HieData data;
  std::size_t line_no = 1;
  while (std::getline(file, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() < header.size()) {
      throw DataError("line " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " fields, header has " +
                      std::to_string(header.size()));
    }
    HieRow row;
    for (std::size_t j = 0; j < 7; ++j) {
      const auto value = parse_double(cells[index[j]]);
      if (!value) {
        throw DataError("line " + std::to_string(line_no) +
                        ": non-numeric value '" + std::string(cells[index[j]]) +
                        "'");
      }
      if (j < 6) {
        row.covariates[j] = *value;
      } else {
        row.hlthp = *value;
      }
    }
    if (row.hlthp != 0.0 && row.hlthp != 1.0) {
      throw DataError("line " + std::to_string(line_no) + ": hlthp must be 0 or 1");
    }
    data.rows.push_back(row);
  }
  return data;
}

void validate_full_hie(const HieData& data) {
  if (data.rows.size() != kHieRows) {
    throw DataError("expected " + std::to_string(kHieRows) + " rows, found " +
                    std::to_string(data.rows.size()));
  }
  if (data.events() != kHieEvents) {
    throw DataError("expected " + std::to_string(kHieEvents) +
                    " events (hlthp = 1), found " +
                    std::to_string(data.events()));
  }
}

Eigen::MatrixXd standardized_base(const HieData& data) {
  const auto n = static_cast<Eigen::Index>(data.rows.size());
  if (n == 0) throw DataError("no rows to standardize");
  Eigen::MatrixXd x(n, 6);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      x(i, j) = data.rows[static_cast<std::size_t>(i)].covariates[static_cast<std::size_t>(j)];
    }
  }
  for (Eigen::Index j = 0; j < 6; ++j) {
    const double mean = x.col(j).mean();
    const double sd =
        std::sqrt((x.col(j).array() - mean).square().sum() / static_cast<double>(n));
    if (!(sd > 0.0)) {
      throw DataError(std::string("column '") + kHieCovariates[static_cast<std::size_t>(j)] +
                      "' has zero variance and cannot be standardized");
    }
    x.col(j) = (x.col(j).array() - mean) / sd;
  }
  return x;
}

Eigen::MatrixXd quadratic_design(const Eigen::MatrixXd& base) {
  const Eigen::Index k = base.cols();
  const Eigen::Index d = 2 * k + k * (k - 1) / 2;
  Eigen::MatrixXd q(base.rows(), d);
  q.leftCols(k) = base;
  q.middleCols(k, k) = base.array().square().matrix();
  Eigen::Index col = 2 * k;
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      q.col(col++) = base.col(a).cwiseProduct(base.col(b));
    }
  }
  return q;
}

Eigen::VectorXd hie_outcomes(const HieData& data) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.rows.size()));
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = data.rows[i].hlthp;
  }
  return y;
}

}  // namespace boundarylab::harness
