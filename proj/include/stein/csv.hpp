#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace stein {

/// A named CSV table of preformatted cells.
struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;
};

/// 10 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

/// Single-column numeric CSV, one value per line. Blank lines and a
/// non-numeric first line (header) are skipped. Throws InputError.
std::vector<double> read_vector_csv(const std::filesystem::path& path);

/// Rectangular numeric CSV. Throws InputError.
std::vector<std::vector<double>> read_matrix_csv(const std::filesystem::path& path);

}  // namespace stein
