#pragma once

#include <cstddef>
#include <functional>

namespace tsclust {

// Worker cap: CLUSTER_THREADS env var, else hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, n). Each index writes only its own output slot,
// so the result is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tsclust
