#pragma once

#include <cstddef>
#include <functional>

namespace redahd::util {

// Runs fn(0..n-1) on up to `workers` threads (1 = inline). The first exception
// thrown by any call is rethrown after all threads finish.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace redahd::util
