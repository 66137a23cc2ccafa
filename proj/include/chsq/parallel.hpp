#pragma once

#include <cstddef>
#include <functional>

namespace chsq {

// Worker count: CHIRAL_SQUEEZE_THREADS caps it; default hardware concurrency.
unsigned thread_limit();

// Runs fn(i) for i in [0, n). Results must be written to disjoint slots so the
// schedule cannot change the output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace chsq
