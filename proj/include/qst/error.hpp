// Copyright 2026 The qst Authors
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

#ifndef QST_ERROR_HPP
#define QST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qst {

/// Raised for malformed inputs: bad probabilities, out-of-range sites,
/// inconsistent configurations. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
   public:
    explicit ConfigError(const std::string &what) : std::invalid_argument(what) {
    }
};

/// Raised when a computed quantity breaks a numerical invariant (trace,
/// positivity, completeness, normalization). Maps to CLI exit code 3.
class InvariantError : public std::runtime_error {
   public:
    explicit InvariantError(const std::string &what) : std::runtime_error(what) {
    }
};

}  // namespace qst

#endif
