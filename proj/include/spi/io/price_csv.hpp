#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spi/error.hpp"

namespace spi {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

struct SeriesCsvOptions {
  bool require_positive = true;
  std::size_t min_rows = 2;
};

// One value per line, either alone or after a date (or any label) column:
//   "101.5"  or  "2020-01-02,101.5".
// Blank lines are skipped. A first line whose value field is not numeric is
// taken as a header. Errors carry the 1-based line number.
inline std::vector<double> read_series_csv(std::istream& in, const SeriesCsvOptions& opt = {}) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_commas(line);
    if (fields.size() > 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 1 or 2 columns, found " +
                       std::to_string(fields.size()), line_no);
    }
    const auto value = detail::parse_double(fields.back());
    if (first) {
      first = false;
      if (!value) continue;  // header
    }
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns) {
      throw ParseError("line " + std::to_string(line_no) + ": column count changed from " + std::to_string(columns) +
                       " to " + std::to_string(fields.size()), line_no);
    }
    if (!value) {
      throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(detail::trim(fields.back())) +
                       "' is not a number", line_no);
    }
    if (!std::isfinite(*value) || (opt.require_positive && !(*value > 0.0))) {
      throw ParseError("line " + std::to_string(line_no) + ": value must be " +
                       (opt.require_positive ? "positive and finite" : "finite"), line_no);
    }
    values.push_back(*value);
  }
  if (in.bad()) throw ParseError("read error after line " + std::to_string(line_no), line_no);
  if (values.size() < opt.min_rows) {
    throw ParseError("need at least " + std::to_string(opt.min_rows) + " data rows, found " +
                     std::to_string(values.size()), line_no);
  }
  return values;
}

inline std::vector<double> read_price_csv(std::istream& in) { return read_series_csv(in); }

inline std::vector<double> read_series_csv_file(const std::string& path, const SeriesCsvOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_series_csv(in, opt);
}

}  // namespace spi
