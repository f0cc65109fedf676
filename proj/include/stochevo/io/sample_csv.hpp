/* Copyright 2026 The stochevo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */


#ifndef STOCHEVO_IO_SAMPLE_CSV_HPP
#define STOCHEVO_IO_SAMPLE_CSV_HPP

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stochevo/errors.hpp"
#include "stochevo/io/format.hpp"
#include "stochevo/tail_estimation.hpp"

namespace stochevo::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace detail

/// Reads a SampleSet from CSV with a header row. The column is `column` when
/// given, otherwise "value", otherwise "state" (killed-GBM output), otherwise
/// the only column. Rows that are not finite positive numbers are rejected
/// with their 1-based line number.
inline SampleSet read_sample_csv(std::istream& in, const std::optional<std::string>& column = {},
                                 std::string source = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::trim(line).empty()) break;
  }
  if (detail::trim(line).empty()) throw validation_error("CSV input is empty; expected a header row");
  const std::string header_line = line;
  const auto header = detail::split_fields(header_line);

  std::optional<std::size_t> index;
  auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  if (column) {
    index = find(*column);
    if (!index) throw validation_error("line " + std::to_string(line_no) + ": no column named '" + *column + "'");
  } else if ((index = find("value"))) {
  } else if ((index = find("state"))) {
  } else if (header.size() == 1) {
    index = 0;
  } else {
    throw validation_error("line " + std::to_string(line_no) + ": header has no 'value' column");
  }

  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_fields(line);
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != header.size()) {
      throw validation_error(where + "expected " + std::to_string(header.size()) + " fields, found " +
                             std::to_string(fields.size()));
    }
    const std::string_view text = fields[*index];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw validation_error(where + "'" + std::string(text) + "' is not a number");
    }
    if (!std::isfinite(v) || v <= 0.0) {
      throw validation_error(where + "value " + std::string(text) + " must be finite and strictly positive");
    }
    values.push_back(v);
  }
  if (values.empty()) throw validation_error("CSV input has no data rows");
  return SampleSet(std::move(values), std::move(source));
}

inline void write_sample_csv(std::ostream& os, std::span<const double> values) {
  os << "value\n";
  for (double v : values) os << format_double(v) << '\n';
}

}  // namespace stochevo::io

#endif  // STOCHEVO_IO_SAMPLE_CSV_HPP
