//------------------------------------------------------------------------------
//
//   Copyright 2026 The divrange Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "divrange/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace divrange {

std::size_t worker_count()
{
  if (char const *env = std::getenv("DIVRANGE_THREADS"))
  {
    try
    {
      long const n = std::stol(env);
      if (n > 0)
      {
        return static_cast<std::size_t>(n);
      }
    }
    catch (std::exception const &)
    {
      // fall through to auto
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::function<void(std::size_t, std::size_t)> const &body)
{
  if (n == 0)
  {
    return;
  }
  // Small jobs are not worth a thread.
  std::size_t const workers = std::min(worker_count(), std::max<std::size_t>(1, n / 256));
  if (workers <= 1)
  {
    body(0, n);
    return;
  }

  std::vector<std::thread> threads;
  std::exception_ptr       failure;
  std::mutex               failure_mutex;
  std::size_t const        chunk = (n + workers - 1) / workers;

  for (std::size_t w = 0; w < workers; ++w)
  {
    std::size_t const begin = w * chunk;
    std::size_t const end = std::min(n, begin + chunk);
    if (begin >= end)
    {
      break;
    }
    threads.emplace_back([&, begin, end] {
      try
      {
        body(begin, end);
      }
      catch (...)
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
        {
          failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : threads)
  {
    t.join();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
}

}  // namespace divrange
