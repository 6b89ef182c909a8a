// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "magbloch/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace magbloch
{

int WorkerCount()
{
  if (const char *env = std::getenv("MAGBLOCH_THREADS"))
  {
    try
    {
      const int n = std::stoi(env);
      if (n > 0)
      {
        return n;
      }
    }
    catch (const std::exception &)
    {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ParallelFor(std::size_t count, const std::function<void(std::size_t)> &task, int workers)
{
  if (workers <= 0)
  {
    workers = WorkerCount();
  }
  const std::size_t threads = std::min<std::size_t>(workers, count);
  if (threads <= 1)
  {
    for (std::size_t i = 0; i < count; i++)
    {
      task(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]
  {
    for (std::size_t i = next++; i < count; i = next++)
    {
      try
      {
        task(i);
      }
      catch (...)
      {
        std::lock_guard lock(error_mutex);
        if (!error)
        {
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; t++)
  {
    pool.emplace_back(worker);
  }
  pool.clear();
  if (error)
  {
    std::rethrow_exception(error);
  }
}

}  // namespace magbloch
