//
// Copyright 2026 The sclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sclab {

// Raised when an argument or configuration value violates its contract.
// `field()` names the offending parameter so callers can report it.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Raised when an exact enumeration would exceed its configured size cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {

inline void require(bool ok, std::string_view field, std::string_view message) {
  if (!ok) throw ValidationError(std::string(field), std::string(message));
}

inline void require_finite(double v, std::string_view field) {
  require(std::isfinite(v), field, "must be finite");
}

inline void require_non_negative(double v, std::string_view field) {
  require(std::isfinite(v) && v >= 0.0, field, "must be finite and >= 0");
}

inline void require_probability(double v, std::string_view field) {
  require(std::isfinite(v) && v >= 0.0 && v <= 1.0, field, "must lie in [0, 1]");
}

}  // namespace detail
}  // namespace sclab
