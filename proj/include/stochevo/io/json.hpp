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

#ifndef STOCHEVO_IO_JSON_HPP
#define STOCHEVO_IO_JSON_HPP

#include <cmath>
#include <string>

#include <json.hpp>

#include "stochevo/io/format.hpp"

namespace stochevo::io {

using json = nlohmann::json;

namespace detail {

inline void dump_stable_into(const json& value, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (value.type()) {
    case json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      // nlohmann's default object is a std::map, so keys come out sorted.
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump_stable_into(it.value(), out, indent + 2);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_stable_into(value[i], out, indent + 2);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = value.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += value.dump();
  }
}

}  // namespace detail

/// Deterministic rendering: sorted keys, two-space indent, doubles at 17
/// significant digits, non-finite doubles as null. Ends with a newline.
inline std::string dump_stable(const json& value) {
  std::string out;
  detail::dump_stable_into(value, out, 0);
  out += '\n';
  return out;
}

/// Finite doubles as numbers, everything else as null.
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace stochevo::io

#endif  // STOCHEVO_IO_JSON_HPP
