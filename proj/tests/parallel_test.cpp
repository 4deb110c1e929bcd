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


#include <atomic>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nightwatch/parallel.hpp"

using namespace nightwatch;

TEST_CASE("parallel_for_frames visits every index once")
{
  for (int jobs : {1, 2, 4}) {
    std::vector<std::atomic<int>> hits(57);
    parallel_for_frames(hits.size(), jobs, [&](std::size_t i) {++hits[i];});
    for (const auto & h : hits) {
      CHECK(h.load() == 1);
    }
  }
  int calls = 0;
  parallel_for_frames(0, 3, [&](std::size_t) {++calls;});
  CHECK(calls == 0);
}

TEST_CASE("parallel_for_frames rethrows the first failure")
{
  for (int jobs : {1, 3}) {
    CHECK_THROWS_AS(parallel_for_frames(20, jobs, [](std::size_t i) {
        if (i == 13) {
          throw std::runtime_error("frame 13");
        }
      }), std::runtime_error);
  }
}

TEST_CASE("scoped thread count is restored")
{
  const int before = max_threads();
  {
    ScopedThreads one(1);
    CHECK(max_threads() == 1);
  }
  CHECK(max_threads() == before);
  CHECK(max_threads_in_team() == 1);
  CHECK(thread_id() == 0);
}
