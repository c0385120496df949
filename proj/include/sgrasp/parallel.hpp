#pragma once

#include <functional>

namespace sgrasp {

// Worker count used when a call passes threads = 0. Defaults to the hardware
// concurrency; the CLI overrides it with --threads.
int defaultThreads();
void setDefaultThreads(int threads);

// Runs body(i) for i in [0, n). Work is split into contiguous blocks so the
// assignment of indices to threads never affects results. The first exception
// (lowest index) is rethrown after all workers finish.
void parallelFor(int n, const std::function<void(int)>& body, int threads = 0);

}  // namespace sgrasp
