// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace uqx {

/// Runs fn(0..n-1) on a bounded worker pool; threads <= 0 uses the hardware
/// count. The first exception wins and is rethrown after all workers join.
/// Work items must not depend on execution order.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

}  // namespace uqx
