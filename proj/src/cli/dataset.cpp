#include "ddp/cli/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ddp/cli/config.hpp"

namespace ddp::cli {

std::vector<int> Dataset::sizes() const {
  std::vector<int> m;
  for (const auto& s : series) m.push_back(static_cast<int>(s.size()));
  return m;
}

std::vector<double> Dataset::pooled() const {
  std::vector<double> all;
  for (const auto& s : series) all.insert(all.end(), s.begin(), s.end());
  return all;
}

double Dataset::min() const {
  const auto all = pooled();
  return *std::min_element(all.begin(), all.end());
}

double Dataset::max() const {
  const auto all = pooled();
  return *std::max_element(all.begin(), all.end());
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
  throw DataError("line " + std::to_string(line) + ": " + why);
}

double parse_value(const std::string& field, std::size_t line) {
  double v = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) bad_line(line, "non-numeric value '" + field + "'");
  if (!std::isfinite(v)) bad_line(line, "non-finite value '" + field + "'");
  return v;
}

int parse_index(const std::string& field, std::size_t line) {
  int v = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) bad_line(line, "series index '" + field + "' is not an integer");
  if (v < 1) bad_line(line, "series index must be at least 1");
  return v;
}

}  // namespace

Dataset ingest(std::istream& in, const std::string& format) {
  if (format != "long" && format != "wide") throw ConfigError("format must be 'long' or 'wide'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(trim(line));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw DataError("input file is empty");

  Dataset d;
  if (format == "long") {
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const std::size_t line = i + 1;
      if (lines[i].empty()) continue;
      const auto fields = split_fields(lines[i]);
      if (fields.size() != 2) bad_line(line, "expected 2 columns (t,value), found " + std::to_string(fields.size()));
      const int t = parse_index(fields[0], line);
      const double x = parse_value(fields[1], line);
      if (static_cast<int>(d.series.size()) < t) d.series.resize(t);
      d.series[t - 1].push_back(x);
    }
  } else {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      d.series.emplace_back();
      if (lines[i].empty()) continue;
      for (const auto& field : split_fields(lines[i])) d.series.back().push_back(parse_value(field, i + 1));
    }
  }
  if (d.pooled().empty()) throw DataError("input contains no observations");
  return d;
}

Dataset ingest_file(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return ingest(in, format);
}

}  // namespace ddp::cli
