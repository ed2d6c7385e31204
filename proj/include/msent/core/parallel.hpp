#pragma once

#include <cstddef>
#include <functional>

namespace msent {

// Calls body(i) for i in [0, count) on up to `threads` workers (0 = hardware
// concurrency). Rethrows the first exception after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace msent
