#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace boundarylab::harness {

// A CSV table held as already-formatted cells.
struct CsvTable {
  std::string name;  // file name, e.g. "table1.csv"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string render() const;
  // Writes `dir / name`, creating `dir` if needed. Returns the path.
  std::filesystem::path write(const std::filesystem::path& dir) const;
};

inline constexpr const char* kMissingCell = "--";

// printf-style "%.{decimals}f"; NaN renders as "--" and "-0.000" as "0.000".
std::string fmt_fixed(double value, int decimals);
// "%.{digits}g".
std::string fmt_sig(double value, int digits);
// Round-trip precision for the full-precision companion files.
std::string fmt_full(double value);
std::string fmt_int(long long value);

}  // namespace boundarylab::harness
