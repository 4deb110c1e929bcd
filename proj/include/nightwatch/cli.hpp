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


#ifndef NIGHTWATCH_CLI_HPP_
#define NIGHTWATCH_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace nightwatch
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `nightwatch` executable. Usage and help text go to
/// `out`, diagnostics to `err`. Returns 0, 1 (runtime failure) or 2 (invalid
/// arguments; nothing has been written in that case).
int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

/// Same, with argv[0] supplied as "nightwatch".
int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace nightwatch

#endif  // NIGHTWATCH_CLI_HPP_
