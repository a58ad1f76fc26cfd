// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 xdoc Contributors

#pragma once

#include <stdexcept>

namespace xdoc {

// Malformed or inconsistent input data (bad record, unreadable file).
// The CLI maps this to exit code 1.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated precondition or invalid parameter. The CLI maps this to exit
// code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace xdoc
