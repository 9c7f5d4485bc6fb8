#pragma once

#include <cstddef>
#include <functional>

namespace gnls {

// Runs body(i) for i in [0, count) on up to `threads` worker threads.
// Work is handed out by index, so results written to slot i are independent
// of the thread count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace gnls
