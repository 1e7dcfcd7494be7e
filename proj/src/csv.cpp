#include "stein/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stein/errors.hpp"

namespace stein {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& cell) {
  const std::string t = trim(cell);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string CsvTable::to_string() const {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << to_string();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

std::vector<double> read_vector_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<double> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    const auto v = cells.size() == 1 ? parse_double(cells[0]) : std::nullopt;
    if (!v) {
      if (out.empty() && line_no == 1 && cells.size() == 1) continue;  // header
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected one number per line");
    }
    out.push_back(*v);
  }
  if (out.empty()) throw InputError(path.string() + ": no values");
  return out;
}

std::vector<std::vector<double>> read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& c : cells) {
      const auto v = parse_double(c);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (out.empty() && line_no == 1) continue;  // header
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": non-numeric cell");
    }
    if (!out.empty() && row.size() != out.front().size())
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
    out.push_back(std::move(row));
  }
  if (out.empty()) throw InputError(path.string() + ": no rows");
  return out;
}

}  // namespace stein
