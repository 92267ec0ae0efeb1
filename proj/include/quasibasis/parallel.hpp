#pragma once

#include <cstddef>
#include <functional>

namespace qb {

// Worker count for internal loops. Honors QUASIBASIS_THREADS when set to a
// positive integer, otherwise uses the hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n). Iterations must be independent. Exceptions
// thrown by any iteration are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qb
