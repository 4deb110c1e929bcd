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

#ifndef NIGHTWATCH_PARALLEL_HPP_
#define NIGHTWATCH_PARALLEL_HPP_

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nightwatch
{

inline int max_threads()
{
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Team size inside a parallel region, 1 outside.
inline int max_threads_in_team()
{
#ifdef _OPENMP
  return omp_get_num_threads();
#else
  return 1;
#endif
}

inline int thread_id()
{
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

/// Restores the previous OpenMP team size on scope exit.
class ScopedThreads
{
public:
  explicit ScopedThreads(int n)
  : previous_(max_threads())
  {
#ifdef _OPENMP
    if (n > 0) {
      omp_set_num_threads(n);
    }
#else
    (void)n;
#endif
  }
  ~ScopedThreads()
  {
#ifdef _OPENMP
    omp_set_num_threads(previous_);
#endif
  }
  ScopedThreads(const ScopedThreads &) = delete;
  ScopedThreads & operator=(const ScopedThreads &) = delete;

private:
  int previous_;
};

/// Calls fn(i) for i in [0, n) spread over `jobs` threads, one index per
/// call. Kernels inside fn see a nested region and run on one thread. The
/// first exception thrown by any call is rethrown after the loop.
template<typename Fn>
void parallel_for_frames(std::size_t n, int jobs, Fn && fn)
{
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::exception_ptr error;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(nightwatch_frame_error)
      if (!error) {
        error = std::current_exception();
      }
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace nightwatch

#endif  // NIGHTWATCH_PARALLEL_HPP_
