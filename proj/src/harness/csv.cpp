#include "boundarylab/harness/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "boundarylab/error.hpp"

namespace boundarylab::harness {

namespace {

std::string printf_double(const char* format, int precision, double value) {
  if (std::isnan(value)) return kMissingCell;
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, precision, value);
  std::string out(buffer);
  // A tiny negative value would otherwise print as "-0.0000".
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

}  // namespace

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw InvalidArgument("row width does not match header of " + name);
  }
  rows.push_back(std::move(row));
}

std::string CsvTable::render() const {
  std::ostringstream out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out.str();
}

std::filesystem::path CsvTable::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open " + path.string() + " for writing");
  file << render();
  if (!file) throw Error("failed writing " + path.string());
  return path;
}

std::string fmt_fixed(double value, int decimals) {
  return printf_double("%.*f", decimals, value);
}

std::string fmt_sig(double value, int digits) {
  return printf_double("%.*g", digits, value);
}

std::string fmt_full(double value) { return printf_double("%.*g", 17, value); }

std::string fmt_int(long long value) { return std::to_string(value); }

}  // namespace boundarylab::harness
