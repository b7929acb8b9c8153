// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace ergofit {

// Runs fn(i) for i in [0, n). Work items must be independent; each replicate
// draws from its own stream so results do not depend on scheduling. Respects
// the ERGOFIT_THREADS environment variable; n_threads = 0 means "auto".
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned n_threads = 0);

}  // namespace ergofit
