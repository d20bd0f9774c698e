// Copyright 2026 The Dereverb Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef DEREVERB_COMMON_ERROR_H_
#define DEREVERB_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace dereverb {

// Bad arguments or violated preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what)
      : std::invalid_argument(what) {}
};

// Malformed or unreadable input data (files, manifests, checkpoints).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values or a diverging computation.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dereverb

#define DEREVERB_CHECK(cond, msg)                         \
  do {                                                    \
    if (!(cond)) throw ::dereverb::InvalidArgument(msg);  \
  } while (0)

#endif  // DEREVERB_COMMON_ERROR_H_
