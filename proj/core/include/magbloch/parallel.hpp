// Copyright The magbloch Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAGBLOCH_PARALLEL_HPP
#define MAGBLOCH_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace magbloch
{

// Worker count: MAGBLOCH_THREADS when set to a positive integer, else the logical cores.
int WorkerCount();

// Runs task(i) for i in [0, count) on up to `workers` threads (0 selects WorkerCount()).
// Tasks must be independent; the first exception thrown by a task is rethrown after join.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)> &task,
                 int workers = 0);

}  // namespace magbloch

#endif  // MAGBLOCH_PARALLEL_HPP
