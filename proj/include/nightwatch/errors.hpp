// Copyright 2026 The Nightwatch Authors
//
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

#ifndef NIGHTWATCH_ERRORS_HPP_
#define NIGHTWATCH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace nightwatch
{

/// Invalid parameter or violated precondition. The CLI maps this to exit 2.
class ParamError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed file content (bad header, truncated payload, bad JSON line).
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure: missing file, unwritable destination.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace nightwatch

#endif  // NIGHTWATCH_ERRORS_HPP_
