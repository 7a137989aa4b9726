// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ckptplan {

// Malformed input: bad profile documents, invalid plans, out-of-range indices.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive solver was asked to enumerate an instance above its size guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ckptplan
