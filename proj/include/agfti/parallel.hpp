#pragma once

#include "agfti/common.hpp"

#include <functional>

namespace agfti {

/// Caps the number of worker threads used by the solver kernels.
/// A value <= 0 restores the runtime default.
void set_num_threads(int n);
int num_threads();

/// Reads AGFTI_THREADS from the environment; returns 0 when unset or invalid.
int threads_from_env();

/// Runs body(i) for i in [0, n). Iterations must be independent. The first
/// exception thrown by any iteration is rethrown on the calling thread.
void parallel_for(Index n, const std::function<void(Index)>& body);

}  // namespace agfti
