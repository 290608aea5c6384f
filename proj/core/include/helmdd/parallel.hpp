// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace helmdd
{

// std::thread::hardware_concurrency(), at least 1. Used when a caller passes 0.
unsigned default_thread_count();

// Calls body(i) for i in [0, n) on up to `threads` workers. Iterations must be
// independent. The first exception thrown by any body is rethrown after all
// workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body,
                  unsigned threads = 0);

}  // namespace helmdd
