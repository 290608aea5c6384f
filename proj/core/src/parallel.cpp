// SPDX-License-Identifier: Apache-2.0

#include "helmdd/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace helmdd
{

unsigned default_thread_count()
{
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body, unsigned threads)
{
  if (threads == 0)
  {
    threads = default_thread_count();
  }
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, n));
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < n; i++)
    {
      body(i);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&]() {
    for (std::size_t i = next++; i < n; i = next++)
    {
      try
      {
        body(i);
      }
      catch (...)
      {
        std::lock_guard lock(error_mutex);
        if (!error)
        {
          error = std::current_exception();
        }
        next = n;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; w++)
  {
    pool.emplace_back(run);
  }
  run();
  pool.clear();
  if (error)
  {
    std::rethrow_exception(error);
  }
}

}  // namespace helmdd
