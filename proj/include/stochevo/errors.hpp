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

#ifndef STOCHEVO_ERRORS_HPP
#define STOCHEVO_ERRORS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace stochevo {

/// A precondition on an argument or a type invariant was violated.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a function (e.g. the MGF strip).
class domain_error : public validation_error {
 public:
  using validation_error::validation_error;
};

/// The data cannot support the requested estimate (zero log-spacings,
/// zero variance, ...).
class degenerate_input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No candidate center leaves observations on both sides.
class one_sided_data_error : public degenerate_input_error {
 public:
  using degenerate_input_error::degenerate_input_error;
};

/// Failure reading or writing an external file.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed.
class invariant_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw validation_error(what);
}

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw validation_error(std::string(name) + " must be finite");
}

}  // namespace detail
}  // namespace stochevo

#endif  // STOCHEVO_ERRORS_HPP
