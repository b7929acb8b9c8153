// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ergofit {

// Bad inputs: malformed specs, out-of-range parameters, incompatible pairings.
// CLI maps these to exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: overflow in simulation, non-normalizable density,
// quadrature that will not converge. CLI maps these to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ergofit
