// Copyright 2026 The rrgivens Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RRGIVENS_ERRORS_HPP_
#define RRGIVENS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rrgivens {

// Raised for invalid dimensions, indices, permutations or parameter vectors.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace rrgivens

#endif  // RRGIVENS_ERRORS_HPP_
